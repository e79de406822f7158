#pragma once

#include <cstdint>
#include <map>
#include <unordered_set>
#include <vector>

namespace rbis {

// Master's timestamp for beacon k, shipped to slaves after the fact.
struct FollowUpMessage {
    std::int64_t seq_k = 0;
    std::int64_t t_master_fs = 0;
};

// (k, T_M(k), T_S(k)) — both timestamps refer to the same beacon.
struct TimestampPair {
    std::int64_t seq_k = 0;
    std::int64_t t_master_fs = 0;
    std::int64_t t_slave_fs = 0;
};

// Master side: records beacon arrival timestamps and batches every
// not-yet-sent record into the next FOLLOW_UP emission, oldest first.
class MasterState {
  public:
    struct Counters {
        std::int64_t duplicate_syncs = 0;
    };

    void on_sync(std::int64_t t_master_fs, std::int64_t seq_k);
    std::vector<FollowUpMessage> emit_followups();

    std::size_t unsent_count() const { return unsent_.size(); }
    const Counters& counters() const { return counters_; }

  private:
    std::vector<FollowUpMessage> unsent_;
    std::int64_t last_recorded_k_ = -1;
    Counters counters_;
};

// Slave side: holds pending T_S records keyed by beacon sequence until the
// matching FOLLOW_UP arrives, bounded by an eviction horizon. Formed pairs
// are released in strictly increasing k; a pair is held back only while an
// older beacon could still complete.
class SlaveState {
  public:
    struct Counters {
        std::int64_t orphans = 0;      // FOLLOW_UP with no pending T_S
        std::int64_t duplicates = 0;   // FOLLOW_UP for an already paired k
        std::int64_t evictions = 0;    // pending T_S dropped by the horizon
        std::int64_t stale_drops = 0;  // pair formed behind the release point
    };

    explicit SlaveState(std::int64_t horizon_beacons);

    void on_sync(std::int64_t t_slave_fs, std::int64_t seq_k);

    // Returns the pairs released by this message, in increasing k (usually
    // zero or one).
    std::vector<TimestampPair> on_followup(const FollowUpMessage& msg);

    std::size_t pending_count() const { return pending_.size(); }
    const Counters& counters() const { return counters_; }

  private:
    void evict_aged();
    void release_ready(std::vector<TimestampPair>& out);

    std::map<std::int64_t, std::int64_t> pending_;     // k -> T_S
    std::map<std::int64_t, TimestampPair> ready_;      // formed, not yet released
    std::unordered_set<std::int64_t> paired_;
    std::int64_t horizon_;
    std::int64_t latest_sync_k_ = -1;
    std::int64_t last_released_k_ = -1;
    Counters counters_;
};

}  // namespace rbis
