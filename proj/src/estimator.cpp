#include "rbis/estimator.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rbis {

OffsetEstimate offset_estimate(const TimestampPair& pair) {
    return OffsetEstimate{pair.seq_k, pair.t_slave_fs - pair.t_master_fs};
}

SkewEstimate skew_estimate(const TimestampPair& pair, const TimestampPair& prev) {
    if (prev.seq_k >= pair.seq_k)
        throw std::invalid_argument("skew estimate needs increasing beacon order");
    const std::int64_t dt_m = pair.t_master_fs - prev.t_master_fs;
    if (dt_m == 0)
        throw std::invalid_argument("zero baseline: equal master timestamps");
    const std::int64_t d_theta = (pair.t_slave_fs - pair.t_master_fs) -
                                 (prev.t_slave_fs - prev.t_master_fs);
    return SkewEstimate{pair.seq_k, static_cast<double>(d_theta) /
                                        static_cast<double>(dt_m)};
}

MovingAverageFilter::MovingAverageFilter(std::int64_t window) : window_(window) {
    if (window < 1)
        throw std::invalid_argument("moving average window must be at least 1");
}

double MovingAverageFilter::update(double theta_hat_us) {
    values_.push_back(theta_hat_us);
    if (values_.size() > static_cast<std::size_t>(window_)) values_.pop_front();
    const double mean =
        std::accumulate(values_.begin(), values_.end(), 0.0) /
        static_cast<double>(values_.size());
    return static_cast<double>(std::llround(mean));  // half away from zero
}

KalmanFilter::KalmanFilter(double q_offset, double q_skew, double r)
    : q0_(q_offset), q1_(q_skew), r_(r) {
    if (!(q_offset >= 0.0) || !(q_skew >= 0.0))
        throw std::invalid_argument("process noise must be nonnegative");
    if (!(r > 0.0)) throw std::invalid_argument("measurement noise must be positive");
}

double KalmanFilter::update(double theta_hat_us, double dt_us) {
    if (!std::isfinite(theta_hat_us) || !std::isfinite(dt_us))
        throw std::invalid_argument("non-finite Kalman input");
    if (!initialized_) {
        initialized_ = true;
        x_offset_ = theta_hat_us;
        x_skew_ = 0.0;
        p00_ = r_;
        p01_ = 0.0;
        p11_ = 1e-8;  // (100 ppm)^2 skew prior
        return x_offset_;
    }
    if (!(dt_us > 0.0))
        throw std::invalid_argument("Kalman update needs positive dt");

    // Predict with F = [[1, dt], [0, 1]].
    x_offset_ += x_skew_ * dt_us;
    const double p00 = p00_ + dt_us * (2.0 * p01_ + dt_us * p11_) + q0_;
    const double p01 = p01_ + dt_us * p11_;
    const double p11 = p11_ + q1_;

    // Update with H = [1, 0] in Joseph form.
    const double s = p00 + r_;
    const double k0 = p00 / s;
    const double k1 = p01 / s;
    const double innovation = theta_hat_us - x_offset_;
    x_offset_ += k0 * innovation;
    x_skew_ += k1 * innovation;

    const double a = 1.0 - k0;  // (I - KH) rows: [a, 0], [-k1, 1]
    p00_ = a * a * p00 + k0 * k0 * r_;
    p01_ = a * (p01 - k1 * p00) + k0 * k1 * r_;
    p11_ = p11 - 2.0 * k1 * p01 + k1 * k1 * p00 + k1 * k1 * r_;
    return x_offset_;
}

Estimator::Estimator(const EstimatorConfig& cfg) : cfg_(cfg) {
    switch (cfg.filter) {
        case FilterKind::none:
            break;
        case FilterKind::moving_average:
            ma_.emplace(cfg.window);
            break;
        case FilterKind::kalman:
            kalman_.emplace(cfg.q_offset, cfg.q_skew, cfg.r);
            break;
    }
}

Estimator::Update Estimator::on_pair(const TimestampPair& pair) {
    Update update;
    update.offset = offset_estimate(pair);

    // Quantization can collapse the baseline when the granularity exceeds
    // the beacon spacing; skip the skew sample rather than fault the run.
    if (prev_ && pair.t_master_fs != prev_->t_master_fs) {
        update.skew = skew_estimate(pair, *prev_);
        last_skew_ = update.skew;
    }

    const double theta_us = update.offset.theta_hat_us();
    if (ma_) {
        update.filtered_us = ma_->update(theta_us);
    } else if (kalman_) {
        const double dt_us =
            prev_ ? us_of_fs(pair.t_master_fs - prev_->t_master_fs) : 0.0;
        update.filtered_us = kalman_->update(theta_us, dt_us);
    } else {
        update.filtered_us = theta_us;
    }

    correction_us_ = std::llround(update.filtered_us);
    has_correction_ = true;
    anchor_local_fs_ = pair.t_slave_fs;
    if (cfg_.rate_correction) {
        if (kalman_ && kalman_->initialized())
            rate_comp_ = kalman_->skew();
        else if (last_skew_)
            rate_comp_ = last_skew_->gamma_hat;
    }

    prev_ = pair;
    return update;
}

std::int64_t Estimator::synchronized_fs(std::int64_t local_fs) const {
    std::int64_t sync = local_fs - correction_us_ * kFsPerUs;
    if (cfg_.rate_correction && rate_comp_ != 0.0)
        sync -= std::llround(rate_comp_ *
                             static_cast<double>(local_fs - anchor_local_fs_));
    return sync;
}

}  // namespace rbis
