#include "rbis/engine.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <utility>

#include "rbis/channel.hpp"
#include "rbis/clock.hpp"
#include "rbis/errors.hpp"
#include "rbis/protocol.hpp"
#include "rbis/rng.hpp"

namespace rbis {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// FOLLOW_UP frames ride the association as unicast data, which 802.11
// acknowledges and retransmits; a lost attempt is retried after a short
// backoff instead of silently dropping the batch.
constexpr int kUnicastRetryLimit = 8;
constexpr std::int64_t kUnicastRetryDelayUs = 1'000;

struct Event {
    std::int64_t time_us;
    std::uint64_t seq;
    std::function<void()> fn;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return a.time_us > b.time_us ||
               (a.time_us == b.time_us && a.seq > b.seq);
    }
};

struct SlaveRun {
    std::string id;
    LocalClock clock;
    SlaveState proto;
    Estimator est;
    bool drifts = false;

    std::vector<std::uint8_t> rx_ok;
    std::vector<std::uint8_t> paired;

    bool probes_enabled = false;
    std::int64_t next_probe_n = 1;
    std::uint64_t probe_gen = 0;
    std::unordered_map<std::int64_t, std::int64_t> fires;

    SlaveTrace trace;
};

class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& cfg)
        : cfg_(cfg),
          rngs_(cfg.seed),
          master_clock_(cfg.master.oscillator, cfg.master.granularity_us, 0),
          interval_(cfg.beacon_interval_us),
          followup_interval_(cfg.followup_interval_us),
          probe_fs_(fs_from_us(cfg.probe_period_us)),
          start_(cfg.beacon_interval_us),
          run_end_(cfg.beacon_interval_us +
                   cfg.num_beacons * cfg.beacon_interval_us) {
        master_drifts_ = cfg.master.oscillator.drift_rw_sigma_ppm > 0.0;
        receivers_.push_back("master");
        const auto n = static_cast<std::size_t>(cfg.num_beacons);
        master_rx_.assign(n, 0);
        for (std::size_t i = 0; i < cfg.slaves.size(); ++i) {
            const auto& sc = cfg.slaves[i];
            SlaveRun s{slave_node_id(i),
                       LocalClock(sc.oscillator, sc.granularity_us, 0),
                       SlaveState(cfg.horizon_beacons),
                       Estimator(cfg.estimator)};
            s.drifts = sc.oscillator.drift_rw_sigma_ppm > 0.0;
            s.rx_ok.assign(n, 0);
            s.paired.assign(n, 0);
            s.trace.node_id = s.id;
            receivers_.push_back(s.id);
            slaves_.push_back(std::move(s));
        }
    }

    TraceBundle run() {
        schedule(start_, [this] { emit_beacon(0); });
        schedule_followup(1);
        master_next_n_ = std::max<std::int64_t>(
            1, floor_div(fs_from_us(cfg_.master.oscillator.initial_offset_us),
                         probe_fs_) +
                   1);
        schedule_master_probe();

        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.time_us;
            ev.fn();
        }
        finalize();
        return std::move(bundle_);
    }

  private:
    void schedule(std::int64_t at, std::function<void()> fn) {
        // Modeled arrivals may predate the instant that produced them; the
        // queue stays causal while timestamps keep the modeled value.
        queue_.push(Event{std::max(at, now_), next_seq_++, std::move(fn)});
    }

    bool beacons_remaining() const { return emitted_ < cfg_.num_beacons; }

    void apply_drift_steps(std::int64_t at) {
        if (master_drifts_) {
            master_clock_ = master_clock_.step_drift(at, rngs_.stream("master", "drift"));
            reschedule_master_probe();
        }
        for (std::size_t i = 0; i < slaves_.size(); ++i) {
            auto& s = slaves_[i];
            if (!s.drifts) continue;
            s.clock = s.clock.step_drift(at, rngs_.stream(s.id, "drift"));
            if (s.probes_enabled) reschedule_slave_probe(i);
        }
    }

    void emit_beacon(std::int64_t k) {
        const std::int64_t emit = start_ + k * interval_;
        ++bundle_.beacons_emitted;
        ++emitted_;
        apply_drift_steps(emit);

        const BeaconEvent beacon{k, emit, interval_};
        const auto arrivals =
            deliver_broadcast(beacon, receivers_, cfg_.channel, rngs_);
        if (arrivals[0] && *arrivals[0] >= 0) {
            ++master_arrivals_in_flight_;
            schedule(*arrivals[0],
                     [this, k, a = *arrivals[0]] { on_master_sync(k, a); });
        }
        for (std::size_t i = 0; i < slaves_.size(); ++i) {
            const auto& arr = arrivals[i + 1];
            if (arr && *arr >= 0)
                schedule(*arr, [this, i, k, a = *arr] { on_slave_sync(i, k, a); });
        }
        if (k + 1 < cfg_.num_beacons)
            schedule(start_ + (k + 1) * interval_,
                     [this, k] { emit_beacon(k + 1); });
    }

    void on_master_sync(std::int64_t k, std::int64_t arrival_us) {
        --master_arrivals_in_flight_;
        master_rx_[static_cast<std::size_t>(k)] = 1;
        master_state_.on_sync(master_clock_.local_time(arrival_us), k);
    }

    void on_slave_sync(std::size_t i, std::int64_t k, std::int64_t arrival_us) {
        auto& s = slaves_[i];
        s.rx_ok[static_cast<std::size_t>(k)] = 1;
        s.proto.on_sync(s.clock.local_time(arrival_us), k);
    }

    void schedule_followup(std::int64_t j) {
        // Master-relative emission schedule; keep draining past the last
        // beacon until nothing can remain in flight.
        const std::int64_t target_local_us =
            cfg_.master.oscillator.initial_offset_us + j * followup_interval_;
        const std::int64_t drain_limit_us = cfg_.master.oscillator.initial_offset_us +
                                            (run_end_ - start_) +
                                            2 * std::max(followup_interval_, interval_) +
                                            1'000'000;
        if (target_local_us > drain_limit_us) return;
        std::int64_t at;
        try {
            at = master_clock_.true_time_of(fs_from_us(target_local_us));
        } catch (const std::runtime_error&) {
            return;
        }
        schedule(at, [this, j] { emit_followup(j); });
    }

    void emit_followup(std::int64_t j) {
        const auto batch = master_state_.emit_followups();
        if (!batch.empty()) {
            for (std::size_t i = 0; i < slaves_.size(); ++i) {
                std::optional<std::int64_t> arr;
                std::int64_t attempt_send = now_;
                for (int attempt = 0; attempt < kUnicastRetryLimit; ++attempt) {
                    arr = deliver_unicast(attempt_send, "master", slaves_[i].id,
                                          cfg_.channel, rngs_);
                    if (arr) break;
                    attempt_send += kUnicastRetryDelayUs;
                }
                if (arr)
                    schedule(*arr, [this, i, batch] { on_followup_batch(i, batch); });
            }
        }
        if (beacons_remaining() || master_arrivals_in_flight_ > 0 ||
            master_state_.unsent_count() > 0)
            schedule_followup(j + 1);
    }

    void on_followup_batch(std::size_t i, const std::vector<FollowUpMessage>& batch) {
        auto& s = slaves_[i];
        for (const auto& msg : batch)
            for (const auto& pair : s.proto.on_followup(msg)) process_pair(i, pair);
    }

    void process_pair(std::size_t i, const TimestampPair& pair) {
        auto& s = slaves_[i];
        const auto upd = s.est.on_pair(pair);
        s.paired[static_cast<std::size_t>(pair.seq_k)] = 1;
        s.trace.offsets.push_back(SlaveTrace::OffsetRow{
            pair.seq_k, pair.t_master_fs, pair.t_slave_fs,
            upd.offset.theta_hat_fs, upd.filtered_us});
        if (upd.skew) s.trace.skews.push_back(*upd.skew);

        const std::int64_t emit = start_ + pair.seq_k * interval_;
        const std::int64_t true_offset_fs =
            s.clock.unquantized_fs(emit) - master_clock_.unquantized_fs(emit);
        s.trace.estimate_residuals_us.push_back(
            us_of_fs(upd.offset.theta_hat_fs - true_offset_fs));

        if (!s.probes_enabled) {
            s.probes_enabled = true;
            const std::int64_t sync_now =
                s.est.synchronized_fs(s.clock.local_time(now_));
            s.next_probe_n =
                std::max<std::int64_t>(1, floor_div(sync_now, probe_fs_) + 1);
        }
        reschedule_slave_probe(i);
    }

    void reschedule_slave_probe(std::size_t i) {
        ++slaves_[i].probe_gen;
        schedule_slave_probe(i);
    }

    void schedule_slave_probe(std::size_t i) {
        auto& s = slaves_[i];
        if (!s.probes_enabled) return;
        const std::int64_t target_fs = s.next_probe_n * probe_fs_;
        const auto sync_at = [&](std::int64_t t) {
            return s.est.synchronized_fs(s.clock.local_time(t));
        };
        std::int64_t fire;
        if (sync_at(now_) >= target_fs) {
            fire = now_;
        } else if (sync_at(run_end_) < target_fs) {
            return;  // beyond the run; probes past the end are dropped
        } else {
            std::int64_t lo = now_, hi = run_end_;
            while (hi - lo > 1) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                (sync_at(mid) < target_fs ? lo : hi) = mid;
            }
            fire = hi;
        }
        schedule(fire, [this, i, gen = s.probe_gen, n = s.next_probe_n] {
            on_slave_probe(i, gen, n);
        });
    }

    void on_slave_probe(std::size_t i, std::uint64_t gen, std::int64_t n) {
        auto& s = slaves_[i];
        if (gen != s.probe_gen || n != s.next_probe_n) return;  // superseded
        s.fires.emplace(n, now_);
        try_record_sample(i, n);
        ++s.next_probe_n;
        schedule_slave_probe(i);
    }

    void reschedule_master_probe() {
        ++master_probe_gen_;
        schedule_master_probe();
    }

    void schedule_master_probe() {
        const std::int64_t target_fs = master_next_n_ * probe_fs_;
        std::int64_t at;
        try {
            at = master_clock_.true_time_of(target_fs);
        } catch (const std::runtime_error&) {
            return;
        }
        if (at > run_end_) return;
        schedule(at, [this, gen = master_probe_gen_, n = master_next_n_] {
            on_master_probe(gen, n);
        });
    }

    void on_master_probe(std::uint64_t gen, std::int64_t n) {
        if (gen != master_probe_gen_ || n != master_next_n_) return;
        master_fires_.emplace(n, now_);
        for (std::size_t i = 0; i < slaves_.size(); ++i) try_record_sample(i, n);
        ++master_next_n_;
        schedule_master_probe();
    }

    void try_record_sample(std::size_t i, std::int64_t n) {
        auto& s = slaves_[i];
        const auto m = master_fires_.find(n);
        const auto sl = s.fires.find(n);
        if (m == master_fires_.end() || sl == s.fires.end()) return;
        s.trace.ground_truth.push_back(
            GroundTruthSample{n, sl->second - m->second});
    }

    void finalize() {
        std::int64_t master_lost = 0;
        for (auto ok : master_rx_)
            if (!ok) ++master_lost;
        bundle_.master_rx_lost = master_lost;

        for (auto& s : slaves_) {
            auto& t = s.trace;
            std::sort(t.ground_truth.begin(), t.ground_truth.end(),
                      [](const GroundTruthSample& a, const GroundTruthSample& b) {
                          return a.probe_index < b.probe_index;
                      });
            for (std::size_t k = 0; k < master_rx_.size(); ++k) {
                if (!master_rx_[k]) continue;
                if (!s.rx_ok[k])
                    ++t.slave_rx_lost;
                else if (!s.paired[k])
                    ++t.unpaired;
                else
                    ++t.pairs;
            }
            const auto& pc = s.proto.counters();
            t.orphans = pc.orphans;
            t.duplicates = pc.duplicates;
            t.evictions = pc.evictions;
            t.stale_drops = pc.stale_drops;

            if (t.offsets.size() >= 2) {
                std::vector<double> theta;
                theta.reserve(t.offsets.size());
                for (const auto& row : t.offsets)
                    theta.push_back(us_of_fs(row.theta_hat_fs));
                t.estimate_stats = summarize(theta);
                t.residual_stats = summarize(t.estimate_residuals_us);
            }
            if (t.ground_truth.size() >= 2) {
                std::vector<double> truth;
                truth.reserve(t.ground_truth.size());
                for (const auto& g : t.ground_truth)
                    truth.push_back(static_cast<double>(g.theta_true_us));
                t.ground_truth_stats = summarize(truth);
            }
            bundle_.slaves.push_back(std::move(s.trace));
        }
    }

    ScenarioConfig cfg_;
    NodeRngs rngs_;
    LocalClock master_clock_;
    MasterState master_state_;
    bool master_drifts_ = false;
    std::vector<SlaveRun> slaves_;
    std::vector<std::string> receivers_;

    const std::int64_t interval_;
    const std::int64_t followup_interval_;
    const std::int64_t probe_fs_;
    const std::int64_t start_;
    const std::int64_t run_end_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_seq_ = 0;
    std::int64_t now_ = 0;

    std::int64_t emitted_ = 0;
    std::int64_t master_arrivals_in_flight_ = 0;
    std::vector<std::uint8_t> master_rx_;

    std::uint64_t master_probe_gen_ = 0;
    std::int64_t master_next_n_ = 1;
    std::unordered_map<std::int64_t, std::int64_t> master_fires_;

    TraceBundle bundle_;
};

}  // namespace

TraceBundle run(const ScenarioConfig& cfg) {
    auto violations = validate_config(cfg);
    if (!violations.empty()) throw ConfigError(std::move(violations));
    return Simulation(cfg).run();
}

}  // namespace rbis
