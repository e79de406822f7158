#include "rbis/clock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbis {
namespace {

// Search ceiling: beyond this the femtosecond accumulator would overflow.
constexpr std::int64_t kSearchSpanUs = 9'000'000'000;

}  // namespace

std::int64_t LocalClock::rate_of(double skew_ppm) {
    // 1 ppm == 1000 fs per us; quantizing the rate to 1 fs/us keeps the
    // mapping exact while resolving skew to 1e-9 ppm.
    return kFsPerUs + static_cast<std::int64_t>(std::llround(skew_ppm * 1000.0));
}

LocalClock::LocalClock(const OscillatorModel& osc, std::int64_t granularity_us,
                       std::int64_t epoch_true_us)
    : osc_(osc), granularity_us_(granularity_us), epoch_true_us_(epoch_true_us) {
    if (std::abs(osc.skew_ppm) > kMaxSkewPpm)
        throw std::invalid_argument("oscillator skew beyond 1000 ppm");
    if (!(osc.drift_rw_sigma_ppm >= 0.0))
        throw std::invalid_argument("drift sigma must be nonnegative");
    if (granularity_us < 0)
        throw std::invalid_argument("granularity must be nonnegative");
    segments_.push_back(Segment{
        epoch_true_us,
        static_cast<__int128>(osc.initial_offset_us) * kFsPerUs,
        rate_of(osc.skew_ppm),
        osc.skew_ppm,
    });
}

__int128 LocalClock::eval_fs(std::int64_t true_time_us) const {
    // Last segment whose start is <= t; arrivals timestamped just before a
    // drift step fall into the previous segment, as they should.
    auto it = std::upper_bound(
        segments_.begin(), segments_.end(), true_time_us,
        [](std::int64_t t, const Segment& s) { return t < s.start_true_us; });
    const Segment& seg = *(it - 1);
    return seg.start_local_fs +
           static_cast<__int128>(true_time_us - seg.start_true_us) *
               seg.rate_fs_per_us;
}

std::int64_t LocalClock::unquantized_fs(std::int64_t true_time_us) const {
    if (true_time_us < epoch_true_us_)
        throw std::out_of_range("clock not started");
    return static_cast<std::int64_t>(eval_fs(true_time_us));
}

std::int64_t LocalClock::local_time(std::int64_t true_time_us) const {
    if (true_time_us < epoch_true_us_)
        throw std::out_of_range("clock not started");
    const __int128 u = eval_fs(true_time_us);
    if (granularity_us_ == 0) return static_cast<std::int64_t>(u);
    // Timer ticks of g us anchored at the initial counter value; u never
    // drops below the anchor because the rate is positive.
    const __int128 phase = static_cast<__int128>(osc_.initial_offset_us) * kFsPerUs;
    const __int128 tick = static_cast<__int128>(granularity_us_) * kFsPerUs;
    return static_cast<std::int64_t>(phase + (u - phase) / tick * tick);
}

std::int64_t LocalClock::true_time_of(std::int64_t local_fs) const {
    if (local_fs < osc_.initial_offset_us * kFsPerUs)
        throw std::invalid_argument("local value precedes initial offset");
    if (local_time(epoch_true_us_) >= local_fs) return epoch_true_us_;

    const std::int64_t limit = epoch_true_us_ + kSearchSpanUs;
    std::int64_t lo = epoch_true_us_;  // local_time(lo) < target
    std::int64_t hi = lo + 1;
    std::int64_t span = 1;
    while (local_time(hi) < local_fs) {
        if (hi >= limit)
            throw std::runtime_error("local value unreachable under current skew");
        lo = hi;
        span *= 2;
        hi = std::min(limit, lo + span);
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (local_time(mid) < local_fs ? lo : hi) = mid;
    }
    return hi;
}

LocalClock LocalClock::step_drift(std::int64_t at_true_us, Rng& rng) const {
    if (osc_.drift_rw_sigma_ppm == 0.0) return *this;
    if (at_true_us < segments_.back().start_true_us)
        throw std::logic_error("drift step behind the latest segment");
    const double next = std::clamp(
        segments_.back().skew_ppm + rng.normal(osc_.drift_rw_sigma_ppm),
        -kMaxSkewPpm, kMaxSkewPpm);
    LocalClock updated = *this;
    updated.segments_.push_back(
        Segment{at_true_us, eval_fs(at_true_us), rate_of(next), next});
    return updated;
}

}  // namespace rbis
