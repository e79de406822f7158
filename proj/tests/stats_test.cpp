#include "rbis/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rbis/rng.hpp"

using namespace rbis;

TEST_CASE("identical samples collapse to their value") {
    const std::vector<double> samples(10, 3.0);
    const auto stats = summarize(samples);
    CHECK(stats.count == 10);
    CHECK(stats.mean_us == 3.0);
    CHECK(stats.std_us == 0.0);
    CHECK(stats.min_us == 3.0);
    CHECK(stats.max_us == 3.0);
    for (double c : stats.sigma_coverage) CHECK(c == 1.0);
}

TEST_CASE("two-point sample has mean zero and std sqrt(2)") {
    const std::vector<double> samples{-1.0, 1.0};
    const auto stats = summarize(samples);
    CHECK(stats.mean_us == 0.0);
    CHECK(stats.std_us == doctest::Approx(std::sqrt(2.0)));
    CHECK(stats.min_us == -1.0);
    CHECK(stats.max_us == 1.0);
    CHECK(stats.band_coverage[0] == 1.0);
}

TEST_CASE("fewer than two samples is an error") {
    const std::vector<double> one{5.0};
    CHECK_THROWS_AS((void)summarize(one), std::invalid_argument);
    CHECK_THROWS_AS((void)summarize(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("gaussian coverage matches the normal distribution") {
    Rng rng(424242);
    std::vector<double> samples;
    samples.reserve(200'000);
    for (int i = 0; i < 200'000; ++i) samples.push_back(rng.normal(5.0));
    const auto stats = summarize(samples);
    CHECK(stats.mean_us == doctest::Approx(0.0).scale(5.0).epsilon(0.01));
    CHECK(stats.std_us == doctest::Approx(5.0).epsilon(0.01));
    CHECK(stats.sigma_coverage[0] == doctest::Approx(0.6827).epsilon(0.01));
    CHECK(stats.sigma_coverage[1] == doctest::Approx(0.9545).epsilon(0.005));
    CHECK(stats.sigma_coverage[2] == doctest::Approx(0.9973).epsilon(0.002));
}

TEST_CASE("fixed bands count absolute deviations") {
    const std::vector<double> samples{-30.0, -16.0, -10.0, 0.0, 14.0, 22.0, 31.0, 5.0};
    const auto stats = summarize(samples);
    CHECK(stats.band_coverage[0] == doctest::Approx(4.0 / 8.0));  // |x| <= 15
    CHECK(stats.band_coverage[1] == doctest::Approx(6.0 / 8.0));  // |x| <= 22
    CHECK(stats.band_coverage[2] == doctest::Approx(7.0 / 8.0));  // |x| <= 30
}

TEST_CASE("histogram puts values into aligned half-open bins") {
    SUBCASE("two values in one unit bin") {
        const std::vector<double> values{0.2, 0.7};
        const auto hist = make_histogram(values, 1.0);
        REQUIRE(hist.bins.size() == 1);
        CHECK(hist.bins.at(0) == 2);
        CHECK(hist.total == 2);
    }
    SUBCASE("empty input gives an empty histogram") {
        const auto hist = make_histogram(std::vector<double>{}, 1.0);
        CHECK(hist.bins.empty());
        CHECK(hist.total == 0);
    }
    SUBCASE("edges align to multiples of the width") {
        const std::vector<double> values{-0.5, 0.5};
        const auto hist = make_histogram(values, 1.0);
        REQUIRE(hist.bins.size() == 2);
        CHECK(hist.bins.at(-1) == 1);
        CHECK(hist.bins.at(0) == 1);
        CHECK(hist.lower_edge(-1) == -1.0);
    }
    SUBCASE("bin width must be positive") {
        CHECK_THROWS_AS((void)make_histogram(std::vector<double>{1.0}, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("histogram counts sum to the sample count and density to one") {
    Rng rng(6);
    std::vector<double> values;
    for (int i = 0; i < 5000; ++i) values.push_back(rng.normal(7.0));
    const auto hist = make_histogram(values, 0.5);
    std::int64_t total = 0;
    double density_integral = 0.0;
    for (const auto& [index, count] : hist.bins) {
        total += count;
        density_integral += hist.density(count) * hist.bin_width;
    }
    CHECK(total == 5000);
    CHECK(density_integral == doctest::Approx(1.0).epsilon(1e-9));
}
