#include "rbis/scenario.hpp"

#include <cmath>

namespace rbis {

ScenarioConfig::ScenarioConfig() {
    // Calibrated to reproduce the reference testbed's accuracy figures:
    // equal-rate 4 ppm oscillators, 1 us timers, and 3.88 us of Gaussian
    // timestamping jitter on each reception path.
    master.oscillator.skew_ppm = 4.0;
    master.granularity_us = 1;
    ClockConfig slave;
    slave.oscillator.skew_ppm = 4.0;
    slave.granularity_us = 1;
    slaves.push_back(slave);
    channel.jitter.kind = JitterKind::gaussian;
    channel.jitter.sigma_us = 3.88;
}

std::string slave_node_id(std::size_t index) {
    return index == 0 ? "slave" : "slave" + std::to_string(index + 1);
}

namespace {

void check_clock(const ClockConfig& clock, const std::string& prefix,
                 std::vector<std::string>& errors) {
    if (std::abs(clock.oscillator.skew_ppm) > kMaxSkewPpm)
        errors.push_back(prefix + ".skew_ppm: magnitude beyond 1000 ppm");
    if (!(clock.oscillator.drift_rw_sigma_ppm >= 0.0))
        errors.push_back(prefix + ".drift_rw_sigma_ppm: must be nonnegative");
    if (std::abs(clock.oscillator.initial_offset_us) > kMaxInitialOffsetUs)
        errors.push_back(prefix + ".initial_offset_us: magnitude beyond 1e8 us");
    if (clock.granularity_us < 0)
        errors.push_back(prefix + ".granularity_us: must be nonnegative");
}

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
    std::vector<std::string> errors;

    if (cfg.beacon_interval_us <= 0)
        errors.push_back("run.beacon_interval_us: interval must be positive");
    if (cfg.followup_interval_us <= 0)
        errors.push_back("run.followup_interval_us: interval must be positive");
    if (cfg.num_beacons < 2)
        errors.push_back("run.num_beacons: need at least 2 beacons");
    if (cfg.probe_period_us <= 0)
        errors.push_back("run.probe_period_us: interval must be positive");
    if (cfg.horizon_beacons < 1)
        errors.push_back("run.horizon_beacons: must be at least 1");
    if (cfg.slaves.empty())
        errors.push_back("slave: at least one slave is required");

    if (cfg.beacon_interval_us > 0 && cfg.num_beacons > 0 &&
        (cfg.num_beacons + 2 > kMaxRunDurationUs / cfg.beacon_interval_us))
        errors.push_back(
            "run.num_beacons: run exceeds the representable duration (~2 h)");

    check_clock(cfg.master, "master", errors);
    for (std::size_t i = 0; i < cfg.slaves.size(); ++i)
        check_clock(cfg.slaves[i], slave_node_id(i), errors);

    if (!(cfg.channel.base_delay_us >= 0.0))
        errors.push_back("channel.base_delay_us: must be nonnegative");
    if (!(cfg.channel.loss_prob >= 0.0 && cfg.channel.loss_prob <= 1.0))
        errors.push_back("channel.loss_prob: probability out of range");
    if (!(cfg.channel.jitter.sigma_us >= 0.0))
        errors.push_back("channel.jitter_sigma_us: must be nonnegative");
    if (!(cfg.channel.jitter.half_width_us >= 0.0))
        errors.push_back("channel.jitter_half_width_us: must be nonnegative");

    if (cfg.estimator.filter == FilterKind::moving_average &&
        cfg.estimator.window < 1)
        errors.push_back("estimator.window: must be at least 1");
    if (cfg.estimator.filter == FilterKind::kalman) {
        if (!(cfg.estimator.q_offset >= 0.0))
            errors.push_back("estimator.q_offset: must be nonnegative");
        if (!(cfg.estimator.q_skew >= 0.0))
            errors.push_back("estimator.q_skew: must be nonnegative");
        if (!(cfg.estimator.r > 0.0))
            errors.push_back("estimator.r: must be positive");
    }
    return errors;
}

}  // namespace rbis
