// Acceptance suite: exercises every headline accuracy and reproducibility
// requirement end to end and prints one PASS/FAIL line per criterion.

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbis/cli.hpp"
#include "rbis/config_file.hpp"
#include "rbis/engine.hpp"
#include "rbis/estimator.hpp"
#include "rbis/rng.hpp"
#include "rbis/trace_io.hpp"

using namespace rbis;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
    void note(const std::string& msg) {
        if (ok) detail = msg;
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

ScenarioConfig zero_noise_config() {
    ScenarioConfig cfg;
    cfg.master = ClockConfig{};
    cfg.master.granularity_us = 0;
    cfg.slaves.assign(1, ClockConfig{});
    cfg.slaves[0].granularity_us = 0;
    cfg.channel = ChannelModel{};
    cfg.estimator = EstimatorConfig{};
    cfg.num_beacons = 6000;
    cfg.seed = 42;
    return cfg;
}

// Criterion 1: constant 250 us offset, no noise: every estimate is exactly
// 250 us and every post-correction probe reads zero.
Check criterion1() {
    Check c;
    auto cfg = zero_noise_config();
    cfg.slaves[0].oscillator.initial_offset_us = 250;
    const auto bundle = run(cfg);
    const auto& trace = bundle.slaves[0];
    c.require(trace.offsets.size() == 6000,
              "expected 6000 pairs, got " + std::to_string(trace.offsets.size()));
    for (const auto& row : trace.offsets)
        c.require(row.theta_hat_fs == fs_from_us(250),
                  "theta_hat != 250 us at k=" + std::to_string(row.seq_k));
    c.require(trace.ground_truth.size() > 5900, "too few probes");
    for (const auto& g : trace.ground_truth)
        c.require(g.theta_true_us == 0,
                  "theta_true != 0 at n=" + std::to_string(g.probe_index));
    c.note("6000 estimates exact, " + std::to_string(trace.ground_truth.size()) +
           " probes all zero");
    return c;
}

// Criterion 2: +10 ppm slave skew: gamma_hat equals 1e-5 within 1e-12 on
// ideal clocks, and within 2*granularity/dT_M on 1 us timers.
Check criterion2() {
    Check c;
    auto cfg = zero_noise_config();
    cfg.slaves[0].oscillator.skew_ppm = 10.0;
    const auto bundle = run(cfg);
    const auto& skews = bundle.slaves[0].skews;
    c.require(skews.size() == 5999, "missing skew estimates");
    double worst = 0.0;
    for (const auto& s : skews) worst = std::max(worst, std::abs(s.gamma_hat - 1e-5));
    c.require(worst <= 1e-12,
              "ideal-clock gamma error " + fmt(worst) + " > 1e-12");

    auto quantized = cfg;
    quantized.master.granularity_us = 1;
    quantized.slaves[0].granularity_us = 1;
    const auto bundle_q = run(quantized);
    const double bound = 2.0 * 1.0 / 102'400.0;
    double worst_q = 0.0;
    for (const auto& s : bundle_q.slaves[0].skews)
        worst_q = std::max(worst_q, std::abs(s.gamma_hat - 1e-5));
    c.require(worst_q <= bound, "quantized gamma error " + fmt(worst_q) +
                                    " > bound " + fmt(bound));
    c.note("max error ideal " + fmt(worst) + ", 1 us timers " + fmt(worst_q) +
           " (bound " + fmt(bound) + ")");
    return c;
}

// Criterion 3: 4 us gaussian jitter on both paths: residual std within 10%
// of sqrt(2)*4.
Check criterion3() {
    Check c;
    auto cfg = zero_noise_config();
    cfg.master.granularity_us = 1;
    cfg.slaves[0].granularity_us = 1;
    cfg.channel.jitter.kind = JitterKind::gaussian;
    cfg.channel.jitter.sigma_us = 4.0;
    cfg.seed = 1;
    const auto bundle = run(cfg);
    c.require(bundle.slaves[0].residual_stats.has_value(), "no residuals");
    const double std_us = bundle.slaves[0].residual_stats->std_us;
    const double target = std::sqrt(2.0) * 4.0;
    c.require(std::abs(std_us - target) <= 0.10 * target,
              "residual std " + fmt(std_us) + " outside 10% of " + fmt(target));
    c.note("residual std " + fmt(std_us) + " vs " + fmt(target));
    return c;
}

// Criterion 4: calibrated defaults: ground-truth std in [4.3, 6.4] us,
// >=88% within 15 us, >=97% within 22 us, max |theta_true| <= 35 us.
Check criterion4() {
    Check c;
    const ScenarioConfig cfg;  // calibrated defaults, seed 1
    const auto bundle = run(cfg);
    c.require(bundle.slaves[0].ground_truth_stats.has_value(), "no ground truth");
    const auto& stats = *bundle.slaves[0].ground_truth_stats;
    c.require(stats.std_us >= 4.3 && stats.std_us <= 6.4,
              "std " + fmt(stats.std_us) + " outside [4.3, 6.4]");
    c.require(stats.band_coverage[0] >= 0.88,
              "within 15 us: " + fmt(stats.band_coverage[0]));
    c.require(stats.band_coverage[1] >= 0.97,
              "within 22 us: " + fmt(stats.band_coverage[1]));
    const double peak = std::max(std::abs(stats.min_us), std::abs(stats.max_us));
    c.require(peak <= 35.0, "max |theta_true| " + fmt(peak) + " > 35");
    c.note("std " + fmt(stats.std_us) + ", 15us " +
           fmt(stats.band_coverage[0] * 100) + "%, 22us " +
           fmt(stats.band_coverage[1] * 100) + "%, peak " + fmt(peak));
    return c;
}

// Criterion 5: +4 us bias on the slave reception path shifts the mean
// estimate by 4.0 +/- 0.3 us against the same seed.
Check criterion5() {
    Check c;
    const ScenarioConfig base;
    auto biased_cfg = base;
    biased_cfg.channel.per_receiver_bias_us["slave"] = 4.0;
    const auto plain = run(base);
    const auto biased = run(biased_cfg);
    c.require(plain.slaves[0].estimate_stats.has_value() &&
                  biased.slaves[0].estimate_stats.has_value(),
              "missing estimate stats");
    const double shift = biased.slaves[0].estimate_stats->mean_us -
                         plain.slaves[0].estimate_stats->mean_us;
    c.require(std::abs(shift - 4.0) <= 0.3,
              "mean shift " + fmt(shift) + " outside 4.0 +/- 0.3");
    c.note("mean shift " + fmt(shift) + " us");
    return c;
}

// Criterion 6: empirical mu +/- k*sigma coverage of the calibrated run
// matches 68.27/95.45/99.73% within 2 percentage points.
Check criterion6() {
    Check c;
    const ScenarioConfig cfg;
    const auto bundle = run(cfg);
    c.require(bundle.slaves[0].ground_truth_stats.has_value(), "no ground truth");
    const auto& stats = *bundle.slaves[0].ground_truth_stats;
    const double expected[3] = {0.6827, 0.9545, 0.9973};
    std::string got;
    for (int k = 0; k < 3; ++k) {
        const double cov = stats.sigma_coverage[static_cast<std::size_t>(k)];
        got += fmt(cov * 100) + (k < 2 ? "/" : "");
        c.require(std::abs(cov - expected[k]) <= 0.02,
                  std::to_string(k + 1) + "-sigma coverage " + fmt(cov * 100) +
                      "% off by more than 2 points");
    }
    c.note("coverage " + got + " %");
    return c;
}

// Criterion 7: 10% loss per node: pair yield within 3 binomial standard
// deviations of 0.81 * 6000, and the skew column matches a brute-force
// recomputation from the offsets CSV over the actual T_M gaps.
Check criterion7() {
    Check c;
    ScenarioConfig cfg;
    cfg.channel.loss_prob = 0.1;
    const auto bundle = run(cfg);
    const auto& trace = bundle.slaves[0];

    const double expected = 0.81 * 6000.0;
    const double sd = std::sqrt(6000.0 * 0.81 * 0.19);
    c.require(std::abs(static_cast<double>(trace.pairs) - expected) <= 3.0 * sd,
              "pair yield " + std::to_string(trace.pairs) + " outside 3 sd of " +
                  fmt(expected));
    c.require(trace.pairs + bundle.master_rx_lost + trace.slave_rx_lost +
                      trace.unpaired ==
                  6000,
              "beacon accounting does not reconcile");

    // Re-derive gamma from the serialized trace.
    const auto csv = offsets_csv(trace);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> t_m, theta;
    std::vector<std::int64_t> ks;
    while (std::getline(in, line)) {
        double col[5];
        std::size_t pos = 0;
        for (int f = 0; f < 5; ++f) {
            const auto comma = line.find(',', pos);
            const auto field = line.substr(pos, comma - pos);
            std::from_chars(field.data(), field.data() + field.size(), col[f]);
            pos = comma + 1;
        }
        ks.push_back(static_cast<std::int64_t>(col[0]));
        t_m.push_back(col[1]);
        theta.push_back(col[3]);
    }
    c.require(t_m.size() == static_cast<std::size_t>(trace.pairs),
              "CSV row count mismatch");
    c.require(trace.skews.size() == t_m.size() - 1, "skew series length");
    bool gap_seen = false;
    for (std::size_t i = 1; i < t_m.size(); ++i) {
        const double brute = (theta[i] - theta[i - 1]) / (t_m[i] - t_m[i - 1]);
        const double reported = trace.skews[i - 1].gamma_hat;
        c.require(std::abs(brute - reported) <= 1e-12,
                  "gamma mismatch at k=" + std::to_string(ks[i]));
        if (ks[i] != ks[i - 1] + 1) gap_seen = true;
    }
    c.require(gap_seen, "no sequence gaps seen despite loss");
    c.note(std::to_string(trace.pairs) + " pairs, gamma re-derived over gaps");
    return c;
}

// Criterion 8: two cmd_run invocations with the same config and seed write
// byte-identical CSVs and equal manifest checksums.
Check criterion8() {
    Check c;
    const fs::path root =
        fs::temp_directory_path() / ("rbis_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path conf = root / "scenario.conf";
    {
        ScenarioConfig cfg;
        cfg.num_beacons = 1500;
        std::ofstream out(conf);
        out << config_text(cfg);
    }
    const auto out1 = (root / "a").string();
    const auto out2 = (root / "b").string();
    c.require(cmd_run(conf.string(), out1, 7) == kExitOk, "first run failed");
    c.require(cmd_run(conf.string(), out2, 7) == kExitOk, "second run failed");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    for (const char* name : {"offsets.csv", "skew.csv", "ground_truth.csv",
                             "summary.json"})
        c.require(slurp(root / "a" / name) == slurp(root / "b" / name),
                  std::string(name) + " differs between runs");
    const auto m1 = nlohmann::json::parse(slurp(root / "a" / "manifest.json"));
    const auto m2 = nlohmann::json::parse(slurp(root / "b" / "manifest.json"));
    c.require(m1["outputs"] == m2["outputs"], "manifest checksums differ");
    fs::remove_all(root);
    c.note("checksums equal across runs");
    return c;
}

// Criterion 9: filter properties: moving-average output bounded by its
// window, Kalman covariance PSD across a 6000-sample run, and Kalman skew
// within 1% of the least-squares slope on a noise-free ramp.
Check criterion9() {
    Check c;
    Rng rng(2024);
    for (int trial = 0; trial < 1000 && c.ok; ++trial) {
        const auto width = 1 + static_cast<std::int64_t>(rng.uniform01() * 15);
        MovingAverageFilter f(width);
        std::vector<double> window;
        for (int i = 0; i < 24; ++i) {
            const double v = std::floor(rng.uniform01() * 2001.0) - 1000.0;
            window.push_back(v);
            if (window.size() > static_cast<std::size_t>(width))
                window.erase(window.begin());
            const double out = f.update(v);
            double lo = v, hi = v;
            for (double w : window) {
                lo = std::min(lo, w);
                hi = std::max(hi, w);
            }
            c.require(out >= lo && out <= hi, "moving average left its window");
        }
    }

    // PSD check over the calibrated run's estimate sequence.
    const ScenarioConfig cfg;
    const auto bundle = run(cfg);
    const auto& rows = bundle.slaves[0].offsets;
    c.require(rows.size() == 6000, "expected 6000 estimates");
    KalmanFilter kf(1.0, 1e-12, 25.0);
    double min_eig_seen = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double dt =
            i == 0 ? 0.0 : us_of_fs(rows[i].t_master_fs - rows[i - 1].t_master_fs);
        kf.update(us_of_fs(rows[i].theta_hat_fs), dt);
        const auto p = kf.covariance();
        c.require(p[1] == p[2], "covariance asymmetric");
        const double trace = p[0] + p[3];
        const double det = p[0] * p[3] - p[1] * p[2];
        const double min_eig = (trace - std::sqrt(trace * trace - 4 * det)) / 2;
        min_eig_seen = std::min(min_eig_seen, min_eig);
        c.require(min_eig >= -1e-12 * std::max(1.0, trace),
                  "covariance not PSD at step " + std::to_string(i));
    }

    // Noise-free ramp vs the least-squares slope.
    const double gamma = 1e-5, dt = 102'400.0;
    KalmanFilter ramp(1.0, 1e-12, 25.0);
    double mx = 0.0, my = 0.0;
    std::vector<double> xs, ys;
    for (int j = 0; j < 3000; ++j) {
        const double x = j * dt, y = x * gamma;
        ramp.update(y, j == 0 ? 0.0 : dt);
        xs.push_back(x);
        ys.push_back(y);
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = num / den;
    c.require(std::abs(ramp.skew() - slope) <= 0.01 * std::abs(slope),
              "Kalman skew " + fmt(ramp.skew()) + " vs LS slope " + fmt(slope));
    c.note("MA bounded, min eig " + fmt(min_eig_seen) + ", ramp skew " +
           fmt(ramp.skew()));
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"C1 zero-noise offset oracle", criterion1},
        {"C2 skew oracle", criterion2},
        {"C3 jitter propagation", criterion3},
        {"C4 calibrated reproduction", criterion4},
        {"C5 systematic bias shift", criterion5},
        {"C6 sigma coverage table", criterion6},
        {"C7 loss robustness", criterion7},
        {"C8 determinism", criterion8},
        {"C9 filter properties", criterion9},
    };

    bool all_ok = true;
    for (const auto& [name, fn] : criteria) {
        Check result;
        const auto started = std::chrono::steady_clock::now();
        try {
            result = fn();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        std::printf("[%s] %-28s (%lld ms) %s\n", result.ok ? "PASS" : "FAIL",
                    name.c_str(), static_cast<long long>(elapsed),
                    result.detail.c_str());
        all_ok = all_ok && result.ok;
    }
    return all_ok ? 0 : 1;
}
