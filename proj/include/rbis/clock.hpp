#pragma once

#include <cstdint>
#include <vector>

#include "rbis/rng.hpp"
#include "rbis/units.hpp"

namespace rbis {

// Free-running oscillator parameters for one node.
struct OscillatorModel {
    double skew_ppm = 0.0;            // rate error vs true time
    double drift_rw_sigma_ppm = 0.0;  // random-walk step applied once per beacon interval
    std::int64_t initial_offset_us = 0;
};

// Bound on configured and drift-evolved skew; beyond this the model is
// meaningless and monotonicity of the time mapping could not be kept.
inline constexpr double kMaxSkewPpm = 1000.0;

// Quantized local clock: a piecewise-linear mapping from true time (integer
// microseconds) to a local timestamp (integer femtoseconds). Segments are
// appended by step_drift() so past conversions never change. granularity_us
// of 0 selects an ideal continuous readout; otherwise the readout is
// floor-quantized onto the tick grid anchored at the initial offset.
class LocalClock {
  public:
    LocalClock() : LocalClock(OscillatorModel{}, 1, 0) {}
    LocalClock(const OscillatorModel& osc, std::int64_t granularity_us,
               std::int64_t epoch_true_us);

    // Local timestamp at a true instant. Throws std::out_of_range before the
    // clock epoch.
    std::int64_t local_time(std::int64_t true_time_us) const;

    // Earliest true instant t with local_time(t) >= local_fs. Throws
    // std::invalid_argument below the initial offset and std::runtime_error
    // if the value is unreachable.
    std::int64_t true_time_of(std::int64_t local_fs) const;

    // Unquantized reading, used for ground-truth residuals.
    std::int64_t unquantized_fs(std::int64_t true_time_us) const;

    // Random-walk step on the skew at a given instant; returns the updated
    // clock, leaving the past mapping intact. No-op when the configured
    // sigma is zero.
    [[nodiscard]] LocalClock step_drift(std::int64_t at_true_us, Rng& rng) const;

    double current_skew_ppm() const { return segments_.back().skew_ppm; }
    std::int64_t granularity_us() const { return granularity_us_; }
    std::int64_t epoch_true_us() const { return epoch_true_us_; }
    std::int64_t initial_offset_us() const { return osc_.initial_offset_us; }
    const OscillatorModel& oscillator() const { return osc_; }

  private:
    struct Segment {
        std::int64_t start_true_us;
        __int128 start_local_fs;
        std::int64_t rate_fs_per_us;  // kFsPerUs + skew
        double skew_ppm;
    };

    __int128 eval_fs(std::int64_t true_time_us) const;
    static std::int64_t rate_of(double skew_ppm);

    OscillatorModel osc_;
    std::int64_t granularity_us_;
    std::int64_t epoch_true_us_;
    std::vector<Segment> segments_;  // ordered by start; last extends forever
};

}  // namespace rbis
