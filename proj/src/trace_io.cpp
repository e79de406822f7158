#include "rbis/trace_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rbis/errors.hpp"
#include "rbis/config_file.hpp"

namespace rbis {
namespace {

std::string format_int(std::int64_t v) {
    std::array<char, 24> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), p);
}

std::string to_chars_general(double v, int precision) {
    std::array<char, 40> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, precision);
    return std::string(buf.data(), p);
}

double parse_double(const std::string& field, const std::string& where) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end)
        throw IoError("corrupt trace: bad number '" + field + "' in " + where);
    return v;
}

std::int64_t parse_int(const std::string& field, const std::string& where) {
    std::int64_t v = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end)
        throw IoError("corrupt trace: bad integer '" + field + "' in " + where);
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

}  // namespace

std::string format_ratio(double v) { return to_chars_general(v, 9); }

std::string format_compact(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 4.0e18)
        return format_int(static_cast<std::int64_t>(v));
    std::array<char, 40> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), p);
}

std::string format_fixed2(double v) {
    std::array<char, 40> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::fixed, 2);
    return std::string(buf.data(), p);
}

std::string offsets_csv(const SlaveTrace& trace) {
    std::string out(kOffsetsHeader);
    out.push_back('\n');
    for (const auto& row : trace.offsets) {
        out += format_int(row.seq_k);
        out.push_back(',');
        out += us_string_of_fs(row.t_master_fs);
        out.push_back(',');
        out += us_string_of_fs(row.t_slave_fs);
        out.push_back(',');
        out += us_string_of_fs(row.theta_hat_fs);
        out.push_back(',');
        out += format_compact(row.theta_filtered_us);
        out.push_back('\n');
    }
    return out;
}

std::string skew_csv(const SlaveTrace& trace) {
    std::string out(kSkewHeader);
    out.push_back('\n');
    for (const auto& s : trace.skews) {
        out += format_int(s.seq_k);
        out.push_back(',');
        out += format_ratio(s.gamma_hat);
        out.push_back('\n');
    }
    return out;
}

std::string ground_truth_csv(const SlaveTrace& trace) {
    std::string out(kGroundTruthHeader);
    out.push_back('\n');
    for (const auto& g : trace.ground_truth) {
        out += format_int(g.probe_index);
        out.push_back(',');
        out += format_int(g.theta_true_us);
        out.push_back('\n');
    }
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty trace file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw IoError("unexpected header in " + path + ": '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    const std::size_t arity = split_fields(expected_header).size();
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != arity)
            throw IoError("corrupt trace: wrong field count in " + path);
        rows.push_back(std::move(fields));
    }
    return rows;
}

TraceTables read_trace_dir(const std::string& dir) {
    TraceTables t;
    for (const auto& row : read_csv(dir + "/offsets.csv", kOffsetsHeader)) {
        t.offsets_k.push_back(parse_int(row[0], "offsets.csv"));
        t.t_master_us.push_back(parse_double(row[1], "offsets.csv"));
        t.theta_hat_us.push_back(parse_double(row[3], "offsets.csv"));
        t.theta_filtered_us.push_back(parse_double(row[4], "offsets.csv"));
    }
    for (const auto& row : read_csv(dir + "/skew.csv", kSkewHeader)) {
        t.skew_k.push_back(parse_int(row[0], "skew.csv"));
        t.gamma_hat.push_back(parse_double(row[1], "skew.csv"));
    }
    for (const auto& row :
         read_csv(dir + "/ground_truth.csv", kGroundTruthHeader))
        t.theta_true_us.push_back(parse_double(row[1], "ground_truth.csv"));
    return t;
}

std::string histogram_csv(const Histogram& hist, const char* header) {
    std::string out(header);
    out.push_back('\n');
    for (const auto& [index, count] : hist.bins) {
        out += format_compact(hist.lower_edge(index));
        out.push_back(',');
        out += format_int(count);
        out.push_back(',');
        out += format_ratio(hist.density(count));
        out.push_back('\n');
    }
    return out;
}

std::string coverage_table_text(const SummaryStats& stats) {
    const auto mu = stats.mean_us;
    const auto sd = stats.std_us;
    std::ostringstream out;
    out << "Measured clock precision for different standard deviations\n";
    out << "n = " << stats.count << "\n\n";
    const std::array<std::string, 3> heads{"sigma", "2sigma", "3sigma"};
    auto pad = [](const std::string& s, std::size_t w) {
        return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
    };
    out << pad("", 20);
    for (const auto& h : heads) out << pad(h, 18);
    out << "\n" << pad("E(theta=mu) [us]", 20);
    for (int k = 1; k <= 3; ++k)
        out << pad(format_fixed2(mu) + "+/-" + format_fixed2(sd * k), 18);
    out << "\n" << pad("P [%]", 20);
    for (double c : stats.sigma_coverage) out << pad(format_fixed2(c * 100.0), 18);
    out << "\n";
    return out.str();
}

nlohmann::ordered_json stats_json(const SummaryStats& stats) {
    nlohmann::ordered_json j;
    j["count"] = stats.count;
    j["mean_us"] = stats.mean_us;
    j["std_us"] = stats.std_us;
    j["min_us"] = stats.min_us;
    j["max_us"] = stats.max_us;
    j["sigma_coverage"] = stats.sigma_coverage;
    nlohmann::ordered_json bands;
    for (std::size_t b = 0; b < kCoverageBandsUs.size(); ++b)
        bands["within_" + format_compact(kCoverageBandsUs[b]) + "us"] =
            stats.band_coverage[b];
    j["bands"] = bands;
    return j;
}

nlohmann::ordered_json summary_json(const ScenarioConfig& cfg,
                                    const TraceBundle& bundle) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["seed"] = cfg.seed;
    j["counters"]["beacons_emitted"] = bundle.beacons_emitted;
    j["counters"]["master_rx_lost"] = bundle.master_rx_lost;
    for (const auto& s : bundle.slaves) {
        nlohmann::ordered_json c;
        c["pairs"] = s.pairs;
        c["slave_rx_lost"] = s.slave_rx_lost;
        c["unpaired"] = s.unpaired;
        c["orphans"] = s.orphans;
        c["duplicates"] = s.duplicates;
        c["evictions"] = s.evictions;
        c["stale_drops"] = s.stale_drops;
        j["counters"]["slaves"][s.node_id] = c;

        nlohmann::ordered_json series;
        series["estimates"] =
            s.estimate_stats ? stats_json(*s.estimate_stats) : nlohmann::ordered_json();
        series["estimate_residuals"] =
            s.residual_stats ? stats_json(*s.residual_stats) : nlohmann::ordered_json();
        series["ground_truth"] = s.ground_truth_stats
                                     ? stats_json(*s.ground_truth_stats)
                                     : nlohmann::ordered_json();
        j["series"][s.node_id] = series;
    }
    return j;
}

nlohmann::ordered_json manifest_json(
    const ScenarioConfig& cfg,
    const std::vector<std::pair<std::string, std::string>>& file_digests) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["seed"] = cfg.seed;
    nlohmann::ordered_json snapshot;
    for (const auto& [key, value] : config_snapshot(cfg)) snapshot[key] = value;
    j["config"] = snapshot;
    nlohmann::ordered_json files;
    for (const auto& [name, digest] : file_digests)
        files[name]["sha256"] = digest;
    j["outputs"] = files;
    return j;
}

}  // namespace rbis
