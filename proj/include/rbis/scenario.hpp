#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbis/channel.hpp"
#include "rbis/clock.hpp"
#include "rbis/estimator.hpp"

namespace rbis {

struct ClockConfig {
    OscillatorModel oscillator;
    std::int64_t granularity_us = 1;
};

// One reproducible scenario: an access point emitting beacons, one master,
// one or more slaves, a channel, an estimator setup and the ground-truth
// probe schedule. Defaults reproduce a Wi-Fi-like testbed: 102.4 ms beacon
// interval, 6000 beacons, 1 us timers, +/-10 ppm-class oscillators and a
// few microseconds of reception jitter per path.
struct ScenarioConfig {
    std::int64_t beacon_interval_us = 102'400;
    std::int64_t followup_interval_us = 102'400;
    std::int64_t num_beacons = 6'000;
    ClockConfig master;
    std::vector<ClockConfig> slaves;
    ChannelModel channel;
    EstimatorConfig estimator;
    std::int64_t probe_period_us = 100'000;
    std::int64_t horizon_beacons = 16;
    std::uint64_t seed = 1;

    ScenarioConfig();
};

// Node naming used by the engine, the channel bias map and the RNG streams:
// the master is "master"; slave i is "slave", "slave2", "slave3", ...
std::string slave_node_id(std::size_t index);

// All violations, empty when the config is valid.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

// Run-duration ceiling imposed by the femtosecond timestamp representation.
inline constexpr std::int64_t kMaxRunDurationUs = 8'000'000'000;  // ~2.2 h
inline constexpr std::int64_t kMaxInitialOffsetUs = 100'000'000;

}  // namespace rbis
