#include "rbis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbis {

SummaryStats summarize(std::span<const double> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("insufficient samples: need at least 2");

    SummaryStats stats;
    stats.count = static_cast<std::int64_t>(samples.size());
    const double n = static_cast<double>(samples.size());

    double sum = 0.0;
    stats.min_us = samples[0];
    stats.max_us = samples[0];
    for (double v : samples) {
        sum += v;
        stats.min_us = std::min(stats.min_us, v);
        stats.max_us = std::max(stats.max_us, v);
    }
    stats.mean_us = sum / n;

    double ss = 0.0;
    for (double v : samples) {
        const double d = v - stats.mean_us;
        ss += d * d;
    }
    stats.std_us = std::sqrt(ss / (n - 1.0));

    for (int k = 1; k <= 3; ++k) {
        std::int64_t inside = 0;
        for (double v : samples)
            if (std::abs(v - stats.mean_us) <= static_cast<double>(k) * stats.std_us)
                ++inside;
        stats.sigma_coverage[static_cast<std::size_t>(k - 1)] =
            static_cast<double>(inside) / n;
    }
    for (std::size_t b = 0; b < kCoverageBandsUs.size(); ++b) {
        std::int64_t inside = 0;
        for (double v : samples)
            if (std::abs(v) <= kCoverageBandsUs[b]) ++inside;
        stats.band_coverage[b] = static_cast<double>(inside) / n;
    }
    return stats;
}

Histogram make_histogram(std::span<const double> values, double bin_width) {
    if (!(bin_width > 0.0))
        throw std::invalid_argument("bin width must be positive");
    Histogram hist;
    hist.bin_width = bin_width;
    hist.total = static_cast<std::int64_t>(values.size());
    for (double v : values) {
        const auto index = static_cast<std::int64_t>(std::floor(v / bin_width));
        ++hist.bins[index];
    }
    return hist;
}

}  // namespace rbis
