#include "rbis/clock.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace rbis;

namespace {

LocalClock make_clock(double skew_ppm, std::int64_t offset_us,
                      std::int64_t granularity_us, double drift_sigma = 0.0,
                      std::int64_t epoch = 0) {
    OscillatorModel osc;
    osc.skew_ppm = skew_ppm;
    osc.drift_rw_sigma_ppm = drift_sigma;
    osc.initial_offset_us = offset_us;
    return LocalClock(osc, granularity_us, epoch);
}

// Exact-integer oracle for a drift-free clock: offset + t * (1e9 + ppm*1000)
// femtoseconds, floored to the microsecond grid.
std::int64_t oracle_local_us(std::int64_t t_us, std::int64_t skew_ppm_thousandths,
                             std::int64_t offset_us) {
    const __int128 fs = static_cast<__int128>(offset_us) * kFsPerUs +
                        static_cast<__int128>(t_us) * (kFsPerUs + skew_ppm_thousandths);
    return static_cast<std::int64_t>(fs / kFsPerUs);
}

}  // namespace

TEST_CASE("identity clock maps true time to itself") {
    const auto clock = make_clock(0.0, 0, 1);
    CHECK(clock.local_time(5000) == fs_from_us(5000));
    CHECK(clock.local_time(0) == 0);
}

TEST_CASE("pure offset clock shifts the reading") {
    const auto clock = make_clock(0.0, 37, 1);
    CHECK(clock.local_time(5000) == fs_from_us(5037));
}

TEST_CASE("ten ppm over one second gains ten microseconds") {
    const auto clock = make_clock(10.0, 0, 1);
    const std::int64_t expected_us = oracle_local_us(1'000'000, 10'000, 0);
    CHECK(expected_us == 1'000'010);
    CHECK(clock.local_time(1'000'000) == fs_from_us(expected_us));
}

TEST_CASE("local_time rejects instants before the epoch") {
    const auto clock = make_clock(0.0, 0, 1, 0.0, 1000);
    CHECK_THROWS_AS((void)clock.local_time(999), std::out_of_range);
    CHECK(clock.local_time(1000) == 0);
}

TEST_CASE("true_time_of inverts the spec examples") {
    CHECK(make_clock(0.0, 0, 1).true_time_of(fs_from_us(5000)) == 5000);
    CHECK(make_clock(0.0, 37, 1).true_time_of(fs_from_us(5037)) == 5000);

    // Forward-evaluation search oracle for the skewed case.
    const auto clock = make_clock(10.0, 0, 1);
    const std::int64_t target = fs_from_us(1'000'010);
    std::int64_t expected = 999'000;
    while (clock.local_time(expected) < target) ++expected;
    CHECK(expected == 1'000'000);
    CHECK(clock.true_time_of(target) == expected);
}

TEST_CASE("true_time_of rejects values below the initial offset") {
    const auto clock = make_clock(0.0, 100, 1);
    CHECK_THROWS_AS((void)clock.true_time_of(fs_from_us(99)),
                    std::invalid_argument);
}

TEST_CASE("construction rejects out-of-range parameters") {
    CHECK_THROWS_AS(make_clock(1500.0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_clock(0.0, 0, -1), std::invalid_argument);
    CHECK_THROWS_AS(make_clock(0.0, 0, 1, -0.5), std::invalid_argument);
}

TEST_CASE("drift step is a no-op at zero sigma") {
    const auto clock = make_clock(3.0, 0, 1, 0.0);
    Rng rng(1);
    const auto stepped = clock.step_drift(50'000, rng);
    CHECK(stepped.current_skew_ppm() == 3.0);
    CHECK(stepped.local_time(123'456) == clock.local_time(123'456));
}

TEST_CASE("drift is reproducible under the same seed") {
    auto walk = [](std::uint64_t seed) {
        auto clock = make_clock(0.0, 0, 1, 0.1);
        Rng rng(seed);
        std::vector<double> skews;
        for (int i = 1; i <= 20; ++i) {
            clock = clock.step_drift(i * 1000, rng);
            skews.push_back(clock.current_skew_ppm());
        }
        return skews;
    };
    CHECK(walk(7) == walk(7));
    CHECK(walk(7) != walk(8));
}

TEST_CASE("drift step keeps the past mapping intact") {
    auto clock = make_clock(5.0, 0, 0, 0.5);
    Rng rng(11);
    const std::int64_t before = clock.local_time(40'000);
    for (int i = 1; i <= 8; ++i) clock = clock.step_drift(50'000 + i * 1000, rng);
    CHECK(clock.local_time(40'000) == before);
}

TEST_CASE("drift variance grows like K sigma^2") {
    const double sigma = 0.1;
    const int steps = 16;
    const int runs = 10'000;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < runs; ++r) {
        auto clock = make_clock(0.0, 0, 1, sigma);
        Rng rng(1000 + static_cast<std::uint64_t>(r));
        for (int i = 1; i <= steps; ++i)
            clock = clock.step_drift(i * 100'000, rng);
        const double d = clock.current_skew_ppm();
        sum += d;
        sum_sq += d * d;
    }
    const double mean = sum / runs;
    const double var = (sum_sq - runs * mean * mean) / (runs - 1);
    CHECK(var == doctest::Approx(steps * sigma * sigma).epsilon(0.10));
}

TEST_CASE("monotonicity holds for random clocks and instants") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const double skew = (rng.uniform01() * 2.0 - 1.0) * 800.0;
        const auto offset =
            static_cast<std::int64_t>(rng.uniform01() * 2000.0) - 1000;
        const std::int64_t gran = 1 + static_cast<std::int64_t>(rng.uniform01() * 9);
        auto clock = make_clock(skew, offset, gran, 1.0);
        for (int i = 1; i <= 5; ++i)
            clock = clock.step_drift(i * 20'000, rng);
        const auto t1 = static_cast<std::int64_t>(rng.uniform01() * 200'000.0);
        const auto t2 = t1 + static_cast<std::int64_t>(rng.uniform01() * 200'000.0);
        CHECK(clock.local_time(t1) <= clock.local_time(t2));
    }
}

TEST_CASE("quantized output sits on the tick grid anchored at the offset") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const double skew = (rng.uniform01() * 2.0 - 1.0) * 100.0;
        const auto offset =
            static_cast<std::int64_t>(rng.uniform01() * 100.0) - 50;
        const std::int64_t gran = 1 + static_cast<std::int64_t>(rng.uniform01() * 7);
        const auto clock = make_clock(skew, offset, gran);
        const auto t = static_cast<std::int64_t>(rng.uniform01() * 1'000'000.0);
        const std::int64_t quantized = clock.local_time(t);
        const std::int64_t raw = clock.unquantized_fs(t);
        CHECK((quantized - fs_from_us(offset)) % fs_from_us(gran) == 0);
        CHECK(raw - quantized >= 0);
        CHECK(raw - quantized < fs_from_us(gran));
    }
}

TEST_CASE("round trip lands within one tick") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const double skew = (rng.uniform01() * 2.0 - 1.0) * 500.0;
        const std::int64_t gran = 1 + static_cast<std::int64_t>(rng.uniform01() * 4);
        const auto clock = make_clock(skew, 0, gran);
        const auto x = fs_from_us(
            static_cast<std::int64_t>(rng.uniform01() * 1'000'000.0));
        const std::int64_t t = clock.true_time_of(x);
        const std::int64_t back = clock.local_time(t);
        CHECK(back >= x);
        // One tick of slack plus one true-time step: true time advances in
        // whole microseconds, so a fast clock can overshoot by that much.
        CHECK(back - x < fs_from_us(gran) + fs_from_us(2));
        if (t > clock.epoch_true_us()) CHECK(clock.local_time(t - 1) < x);
    }
}

TEST_CASE("zero-parameter clock is the identity") {
    const auto clock = make_clock(0.0, 0, 1);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto t = static_cast<std::int64_t>(rng.uniform01() * 5'000'000.0);
        CHECK(clock.local_time(t) == fs_from_us(t));
    }
}

TEST_CASE("granularity zero reads the continuous clock") {
    const auto clock = make_clock(10.0, 0, 0);
    // 102400 us at 1.00001 is 102401.024 us exactly.
    CHECK(clock.local_time(102'400) == 102'401'024'000'000);
}
