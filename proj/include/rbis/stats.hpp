#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>

namespace rbis {

// True post-correction offset measured by one probe pair: positive means the
// slave fired late (slave behind master).
struct GroundTruthSample {
    std::int64_t probe_index = 0;
    std::int64_t theta_true_us = 0;
};

struct SummaryStats {
    std::int64_t count = 0;
    double mean_us = 0.0;
    double std_us = 0.0;  // sample standard deviation (n-1)
    double min_us = 0.0;
    double max_us = 0.0;
    std::array<double, 3> sigma_coverage{};  // within mu +/- k*sigma, k=1..3
    std::array<double, 3> band_coverage{};   // within +/-15, +/-22, +/-30 us
};

inline constexpr std::array<double, 3> kCoverageBandsUs{15.0, 22.0, 30.0};

// Throws std::invalid_argument for fewer than two samples.
SummaryStats summarize(std::span<const double> samples);

// Half-open bins [edge, edge + width) with edges aligned to multiples of
// the bin width. Only occupied bins are stored.
struct Histogram {
    double bin_width = 1.0;
    std::map<std::int64_t, std::int64_t> bins;  // bin index -> count
    std::int64_t total = 0;

    double lower_edge(std::int64_t index) const {
        return static_cast<double>(index) * bin_width;
    }
    double density(std::int64_t count) const {
        return total == 0 ? 0.0
                          : static_cast<double>(count) /
                                (static_cast<double>(total) * bin_width);
    }
};

Histogram make_histogram(std::span<const double> values, double bin_width);

}  // namespace rbis
