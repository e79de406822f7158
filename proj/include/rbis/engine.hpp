#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rbis/estimator.hpp"
#include "rbis/scenario.hpp"
#include "rbis/stats.hpp"

namespace rbis {

// Everything one scenario run produces for a single slave.
struct SlaveTrace {
    std::string node_id;

    struct OffsetRow {
        std::int64_t seq_k = 0;
        std::int64_t t_master_fs = 0;
        std::int64_t t_slave_fs = 0;
        std::int64_t theta_hat_fs = 0;
        double theta_filtered_us = 0.0;
    };
    std::vector<OffsetRow> offsets;
    std::vector<SkewEstimate> skews;
    std::vector<GroundTruthSample> ground_truth;
    // theta_hat minus the true (unquantized) clock offset at the beacon
    // emission instant.
    std::vector<double> estimate_residuals_us;

    // Disjoint per-beacon outcome counts; together with the bundle-level
    // master_rx_lost they sum exactly to num_beacons.
    std::int64_t pairs = 0;
    std::int64_t slave_rx_lost = 0;  // master received, slave did not
    std::int64_t unpaired = 0;       // both received, never paired

    // Protocol diagnostics.
    std::int64_t orphans = 0;
    std::int64_t duplicates = 0;
    std::int64_t evictions = 0;
    std::int64_t stale_drops = 0;

    std::optional<SummaryStats> estimate_stats;
    std::optional<SummaryStats> residual_stats;
    std::optional<SummaryStats> ground_truth_stats;
};

struct TraceBundle {
    std::int64_t beacons_emitted = 0;
    std::int64_t master_rx_lost = 0;
    std::vector<SlaveTrace> slaves;
};

// Deterministic discrete-event run: events execute in (time, insertion)
// order on integer-microsecond keys, all randomness comes from per-node
// streams derived from cfg.seed, and identical (config, seed) gives a
// bit-identical TraceBundle. Throws ConfigError on an invalid config.
TraceBundle run(const ScenarioConfig& cfg);

}  // namespace rbis
