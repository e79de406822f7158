#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>

#include "rbis/protocol.hpp"
#include "rbis/units.hpp"

namespace rbis {

struct OffsetEstimate {
    std::int64_t seq_k = 0;
    std::int64_t theta_hat_fs = 0;

    double theta_hat_us() const { return us_of_fs(theta_hat_fs); }
};

struct SkewEstimate {
    std::int64_t seq_k = 0;
    double gamma_hat = 0.0;  // dimensionless
};

// theta_hat(k) = T_S(k) - T_M(k); exact integer arithmetic.
OffsetEstimate offset_estimate(const TimestampPair& pair);

// gamma_hat(k) = (theta_hat(k) - theta_hat(k-1)) / (T_M(k) - T_M(k-1)).
// The denominator uses the actual T_M gap, so missing beacons are handled.
// Throws on equal T_M values ("zero baseline") or non-increasing k.
SkewEstimate skew_estimate(const TimestampPair& pair,
                           const TimestampPair& prev);

enum class FilterKind { none, moving_average, kalman };

struct EstimatorConfig {
    FilterKind filter = FilterKind::none;
    std::int64_t window = 8;  // moving average length
    double q_offset = 1.0;    // Kalman process noise, us^2 per step
    double q_skew = 1e-12;
    double r = 25.0;          // Kalman measurement noise, us^2
    bool rate_correction = false;
};

// Mean of the last min(W, count) offset estimates, rounded half away from
// zero to integer microseconds.
class MovingAverageFilter {
  public:
    explicit MovingAverageFilter(std::int64_t window);

    double update(double theta_hat_us);

  private:
    std::deque<double> values_;
    std::int64_t window_;
};

// Two-state linear Kalman filter over [offset_us, skew]; the transition is
// offset += skew * dt and the measurement observes the offset. The Joseph
// form keeps the covariance symmetric positive semidefinite.
class KalmanFilter {
  public:
    KalmanFilter(double q_offset, double q_skew, double r);

    // dt_us is ignored on the first call (which initializes the state) and
    // must be positive afterwards. Returns the posterior offset.
    double update(double theta_hat_us, double dt_us);

    bool initialized() const { return initialized_; }
    double offset_us() const { return x_offset_; }
    double skew() const { return x_skew_; }
    std::array<double, 4> covariance() const {  // row-major 2x2
        return {p00_, p01_, p01_, p11_};
    }

  private:
    double q0_, q1_, r_;
    bool initialized_ = false;
    double x_offset_ = 0.0, x_skew_ = 0.0;
    double p00_ = 0.0, p01_ = 0.0, p11_ = 0.0;
};

// Per-slave estimation pipeline: consumes pairs in increasing k, produces
// raw and filtered offset series plus skew estimates, and maintains the
// step correction that forms the synchronized (virtual) clock. The slave's
// hardware clock is never touched; synchronized time is
// local - correction (- optional rate pre-compensation between beacons).
class Estimator {
  public:
    explicit Estimator(const EstimatorConfig& cfg);

    struct Update {
        OffsetEstimate offset;
        double filtered_us = 0.0;
        std::optional<SkewEstimate> skew;
    };

    Update on_pair(const TimestampPair& pair);

    bool has_correction() const { return has_correction_; }
    std::int64_t correction_us() const { return correction_us_; }
    std::int64_t synchronized_fs(std::int64_t local_fs) const;

    const std::optional<SkewEstimate>& last_skew() const { return last_skew_; }
    const KalmanFilter* kalman() const {
        return kalman_ ? &*kalman_ : nullptr;
    }

  private:
    EstimatorConfig cfg_;
    std::optional<TimestampPair> prev_;
    std::optional<MovingAverageFilter> ma_;
    std::optional<KalmanFilter> kalman_;
    std::optional<SkewEstimate> last_skew_;
    bool has_correction_ = false;
    std::int64_t correction_us_ = 0;
    std::int64_t anchor_local_fs_ = 0;  // T_S at the last correction
    double rate_comp_ = 0.0;            // gamma used between beacons
};

}  // namespace rbis
