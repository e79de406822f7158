#include "rbis/config_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "rbis/errors.hpp"
#include "rbis/trace_io.hpp"

namespace rbis {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

struct Parser {
    ScenarioConfig cfg;  // starts from defaults
    std::vector<std::string>& errors;

    void fail(const std::string& key, const std::string& msg) {
        errors.push_back(key + ": " + msg);
    }

    bool to_i64(const std::string& key, const std::string& v, std::int64_t& out) {
        const char* b = v.data();
        const char* e = b + v.size();
        auto [p, ec] = std::from_chars(b, e, out);
        if (ec != std::errc{} || p != e) {
            fail(key, "expected an integer, got '" + v + "'");
            return false;
        }
        return true;
    }

    bool to_u64(const std::string& key, const std::string& v, std::uint64_t& out) {
        const char* b = v.data();
        const char* e = b + v.size();
        auto [p, ec] = std::from_chars(b, e, out);
        if (ec != std::errc{} || p != e) {
            fail(key, "expected an unsigned integer, got '" + v + "'");
            return false;
        }
        return true;
    }

    bool to_f64(const std::string& key, const std::string& v, double& out) {
        const char* b = v.data();
        const char* e = b + v.size();
        auto [p, ec] = std::from_chars(b, e, out);
        if (ec != std::errc{} || p != e || !std::isfinite(out)) {
            fail(key, "expected a finite number, got '" + v + "'");
            return false;
        }
        return true;
    }

    bool to_bool(const std::string& key, const std::string& v, bool& out) {
        if (v == "true") {
            out = true;
            return true;
        }
        if (v == "false") {
            out = false;
            return true;
        }
        fail(key, "expected true or false, got '" + v + "'");
        return false;
    }

    void apply(const std::string& key, const std::string& value) {
        auto clock_field = [&](ClockConfig& c, std::string_view field) -> bool {
            if (field == "skew_ppm") return to_f64(key, value, c.oscillator.skew_ppm);
            if (field == "drift_rw_sigma_ppm")
                return to_f64(key, value, c.oscillator.drift_rw_sigma_ppm);
            if (field == "initial_offset_us")
                return to_i64(key, value, c.oscillator.initial_offset_us);
            if (field == "granularity_us")
                return to_i64(key, value, c.granularity_us);
            return false;
        };

        if (key == "run.beacon_interval_us") {
            to_i64(key, value, cfg.beacon_interval_us);
            if (!followup_set_) cfg.followup_interval_us = cfg.beacon_interval_us;
        } else if (key == "run.followup_interval_us") {
            followup_set_ = true;
            to_i64(key, value, cfg.followup_interval_us);
        } else if (key == "run.num_beacons") {
            to_i64(key, value, cfg.num_beacons);
        } else if (key == "run.probe_period_us") {
            to_i64(key, value, cfg.probe_period_us);
        } else if (key == "run.horizon_beacons") {
            to_i64(key, value, cfg.horizon_beacons);
        } else if (key == "run.seed") {
            to_u64(key, value, cfg.seed);
        } else if (key.starts_with("master.") &&
                   clock_field(cfg.master, std::string_view(key).substr(7))) {
        } else if (key.starts_with("slave.") &&
                   clock_field(cfg.slaves.at(0), std::string_view(key).substr(6))) {
        } else if (key == "channel.base_delay_us") {
            to_f64(key, value, cfg.channel.base_delay_us);
        } else if (key == "channel.loss_prob") {
            to_f64(key, value, cfg.channel.loss_prob);
        } else if (key == "channel.jitter") {
            if (value == "none")
                cfg.channel.jitter.kind = JitterKind::none;
            else if (value == "gaussian")
                cfg.channel.jitter.kind = JitterKind::gaussian;
            else if (value == "uniform")
                cfg.channel.jitter.kind = JitterKind::uniform;
            else
                fail(key, "expected none, gaussian or uniform, got '" + value + "'");
        } else if (key == "channel.jitter_sigma_us") {
            to_f64(key, value, cfg.channel.jitter.sigma_us);
        } else if (key == "channel.jitter_half_width_us") {
            to_f64(key, value, cfg.channel.jitter.half_width_us);
        } else if (key == "channel.bias.master") {
            double v = 0.0;
            if (to_f64(key, value, v)) cfg.channel.per_receiver_bias_us["master"] = v;
        } else if (key == "channel.bias.slave") {
            double v = 0.0;
            if (to_f64(key, value, v)) cfg.channel.per_receiver_bias_us["slave"] = v;
        } else if (key == "estimator.filter") {
            if (value == "none")
                cfg.estimator.filter = FilterKind::none;
            else if (value == "moving_average")
                cfg.estimator.filter = FilterKind::moving_average;
            else if (value == "kalman")
                cfg.estimator.filter = FilterKind::kalman;
            else
                fail(key, "expected none, moving_average or kalman, got '" + value + "'");
        } else if (key == "estimator.window") {
            to_i64(key, value, cfg.estimator.window);
        } else if (key == "estimator.q_offset") {
            to_f64(key, value, cfg.estimator.q_offset);
        } else if (key == "estimator.q_skew") {
            to_f64(key, value, cfg.estimator.q_skew);
        } else if (key == "estimator.r") {
            to_f64(key, value, cfg.estimator.r);
        } else if (key == "estimator.rate_correction") {
            to_bool(key, value, cfg.estimator.rate_correction);
        } else {
            errors.push_back("unknown key: " + key);
        }
    }

    bool followup_set_ = false;
};

}  // namespace

ScenarioConfig parse_config_text(const std::string& text,
                                 std::vector<std::string>& errors) {
    Parser parser{ScenarioConfig{}, errors};
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) +
                             ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            errors.push_back("line " + std::to_string(lineno) +
                             ": expected 'key = value'");
            continue;
        }
        if (!seen.insert(key).second) {
            errors.push_back("duplicate key: " + key);
            continue;
        }
        parser.apply(key, value);
    }
    return parser.cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();

    std::vector<std::string> errors;
    ScenarioConfig cfg = parse_config_text(buf.str(), errors);
    if (errors.empty()) {
        auto violations = validate_config(cfg);
        errors.insert(errors.end(), violations.begin(), violations.end());
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

std::map<std::string, std::string> config_snapshot(const ScenarioConfig& cfg) {
    std::map<std::string, std::string> snap;
    auto num = [](double v) { return format_compact(v); };

    snap["run.beacon_interval_us"] = std::to_string(cfg.beacon_interval_us);
    snap["run.followup_interval_us"] = std::to_string(cfg.followup_interval_us);
    snap["run.num_beacons"] = std::to_string(cfg.num_beacons);
    snap["run.probe_period_us"] = std::to_string(cfg.probe_period_us);
    snap["run.horizon_beacons"] = std::to_string(cfg.horizon_beacons);
    snap["run.seed"] = std::to_string(cfg.seed);

    auto clock = [&](const std::string& prefix, const ClockConfig& c) {
        snap[prefix + ".skew_ppm"] = num(c.oscillator.skew_ppm);
        snap[prefix + ".drift_rw_sigma_ppm"] = num(c.oscillator.drift_rw_sigma_ppm);
        snap[prefix + ".initial_offset_us"] =
            std::to_string(c.oscillator.initial_offset_us);
        snap[prefix + ".granularity_us"] = std::to_string(c.granularity_us);
    };
    clock("master", cfg.master);
    clock("slave", cfg.slaves.at(0));

    snap["channel.base_delay_us"] = num(cfg.channel.base_delay_us);
    snap["channel.loss_prob"] = num(cfg.channel.loss_prob);
    switch (cfg.channel.jitter.kind) {
        case JitterKind::none:
            snap["channel.jitter"] = "none";
            break;
        case JitterKind::gaussian:
            snap["channel.jitter"] = "gaussian";
            break;
        case JitterKind::uniform:
            snap["channel.jitter"] = "uniform";
            break;
    }
    snap["channel.jitter_sigma_us"] = num(cfg.channel.jitter.sigma_us);
    snap["channel.jitter_half_width_us"] = num(cfg.channel.jitter.half_width_us);
    auto bias = [&](const std::string& node) {
        const auto it = cfg.channel.per_receiver_bias_us.find(node);
        return num(it == cfg.channel.per_receiver_bias_us.end() ? 0.0 : it->second);
    };
    snap["channel.bias.master"] = bias("master");
    snap["channel.bias.slave"] = bias("slave");

    switch (cfg.estimator.filter) {
        case FilterKind::none:
            snap["estimator.filter"] = "none";
            break;
        case FilterKind::moving_average:
            snap["estimator.filter"] = "moving_average";
            break;
        case FilterKind::kalman:
            snap["estimator.filter"] = "kalman";
            break;
    }
    snap["estimator.window"] = std::to_string(cfg.estimator.window);
    snap["estimator.q_offset"] = num(cfg.estimator.q_offset);
    snap["estimator.q_skew"] = num(cfg.estimator.q_skew);
    snap["estimator.r"] = num(cfg.estimator.r);
    snap["estimator.rate_correction"] =
        cfg.estimator.rate_correction ? "true" : "false";
    return snap;
}

std::string config_text(const ScenarioConfig& cfg) {
    std::string out;
    for (const auto& [key, value] : config_snapshot(cfg)) {
        out += key;
        out += " = ";
        out += value;
        out.push_back('\n');
    }
    return out;
}

}  // namespace rbis
