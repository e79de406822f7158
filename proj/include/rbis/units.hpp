#pragma once

#include <cstdint>
#include <string>

namespace rbis {

// Local timestamps are carried as integer femtoseconds so that skew
// accumulation and Eq-style ratios stay exact; true simulation time is
// integer microseconds throughout.
inline constexpr std::int64_t kFsPerUs = 1'000'000'000;

constexpr std::int64_t fs_from_us(std::int64_t us) { return us * kFsPerUs; }

constexpr double us_of_fs(std::int64_t fs) {
    return static_cast<double>(fs) / static_cast<double>(kFsPerUs);
}

// Exact decimal rendering of a femtosecond value in microseconds,
// e.g. 250 us -> "250", 102401.024 us -> "102401.024".
std::string us_string_of_fs(std::int64_t fs);

}  // namespace rbis
