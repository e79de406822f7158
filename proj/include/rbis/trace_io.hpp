#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "rbis/engine.hpp"
#include "rbis/scenario.hpp"
#include "rbis/stats.hpp"

namespace rbis {

inline constexpr const char* kToolName = "rbissim";
inline constexpr const char* kToolVersion = "0.1.0";

// Locale-independent numeric rendering: integers plain, ratios with nine
// significant digits, other reals with shortest round-trip form.
std::string format_ratio(double v);
std::string format_compact(double v);
std::string format_fixed2(double v);

// CSV headers are versioned byte-for-byte.
inline constexpr const char* kOffsetsHeader =
    "k,t_m_us,t_s_us,theta_hat_us,theta_filtered_us";
inline constexpr const char* kSkewHeader = "k,gamma_hat";
inline constexpr const char* kGroundTruthHeader = "n,theta_true_us";
inline constexpr const char* kHistUsHeader = "bin_lower_us,count,density";
inline constexpr const char* kHistPpmHeader = "bin_lower_ppm,count,density";

std::string offsets_csv(const SlaveTrace& trace);
std::string skew_csv(const SlaveTrace& trace);
std::string ground_truth_csv(const SlaveTrace& trace);

// Parsed trace columns needed by report generation.
struct TraceTables {
    std::vector<double> theta_hat_us;
    std::vector<double> theta_filtered_us;
    std::vector<double> t_master_us;
    std::vector<std::int64_t> offsets_k;
    std::vector<double> gamma_hat;
    std::vector<std::int64_t> skew_k;
    std::vector<double> theta_true_us;
};

// Throw IoError on a missing file, unexpected header or malformed row.
std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header);
TraceTables read_trace_dir(const std::string& dir);

std::string histogram_csv(const Histogram& hist, const char* header);

// Coverage table over the ground-truth samples: mu +/- k*sigma bounds and
// the empirical probability mass inside each.
std::string coverage_table_text(const SummaryStats& stats);

nlohmann::ordered_json stats_json(const SummaryStats& stats);
nlohmann::ordered_json summary_json(const ScenarioConfig& cfg,
                                    const TraceBundle& bundle);
nlohmann::ordered_json manifest_json(
    const ScenarioConfig& cfg,
    const std::vector<std::pair<std::string, std::string>>& file_digests);

}  // namespace rbis
