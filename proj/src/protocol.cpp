#include "rbis/protocol.hpp"

#include <stdexcept>

namespace rbis {

void MasterState::on_sync(std::int64_t t_master_fs, std::int64_t seq_k) {
    if (seq_k <= last_recorded_k_) {
        ++counters_.duplicate_syncs;
        return;
    }
    last_recorded_k_ = seq_k;
    unsent_.push_back(FollowUpMessage{seq_k, t_master_fs});
}

std::vector<FollowUpMessage> MasterState::emit_followups() {
    std::vector<FollowUpMessage> batch;
    batch.swap(unsent_);
    return batch;  // recorded in arrival order, so oldest first
}

SlaveState::SlaveState(std::int64_t horizon_beacons) : horizon_(horizon_beacons) {
    if (horizon_beacons < 1)
        throw std::invalid_argument("pairing horizon must be at least 1");
}

void SlaveState::evict_aged() {
    // Keys must stay within (latest - horizon, latest] and the store within
    // the horizon size.
    while (!pending_.empty() &&
           pending_.begin()->first <= latest_sync_k_ - horizon_) {
        pending_.erase(pending_.begin());
        ++counters_.evictions;
    }
    while (pending_.size() > static_cast<std::size_t>(horizon_)) {
        pending_.erase(pending_.begin());
        ++counters_.evictions;
    }
}

void SlaveState::release_ready(std::vector<TimestampPair>& out) {
    // A formed pair is held only while an older beacon is still pending;
    // eviction unblocks it eventually, so loss cannot deadlock the stream.
    while (!ready_.empty()) {
        const auto first = ready_.begin();
        if (!pending_.empty() && pending_.begin()->first < first->first) break;
        out.push_back(first->second);
        last_released_k_ = first->first;
        ready_.erase(first);
    }
}

void SlaveState::on_sync(std::int64_t t_slave_fs, std::int64_t seq_k) {
    pending_[seq_k] = t_slave_fs;
    if (seq_k > latest_sync_k_) latest_sync_k_ = seq_k;
    evict_aged();
}

std::vector<TimestampPair> SlaveState::on_followup(const FollowUpMessage& msg) {
    std::vector<TimestampPair> released;
    const auto it = pending_.find(msg.seq_k);
    if (it == pending_.end()) {
        if (paired_.contains(msg.seq_k))
            ++counters_.duplicates;
        else
            ++counters_.orphans;
        return released;
    }
    const TimestampPair pair{msg.seq_k, msg.t_master_fs, it->second};
    pending_.erase(it);
    paired_.insert(msg.seq_k);
    if (msg.seq_k <= last_released_k_) {
        ++counters_.stale_drops;
    } else {
        ready_.emplace(msg.seq_k, pair);
    }
    release_ready(released);
    return released;
}

}  // namespace rbis
