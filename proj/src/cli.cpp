#include "rbis/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "rbis/config_file.hpp"
#include "rbis/engine.hpp"
#include "rbis/errors.hpp"
#include "rbis/sha256.hpp"
#include "rbis/trace_io.hpp"

namespace rbis {
namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string slave_file_name(const std::string& base, const std::string& ext,
                            const SlaveTrace& trace, bool first) {
    return first ? base + ext : base + "." + trace.node_id + ext;
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
    ScenarioConfig cfg;
    try {
        cfg = load_config_file(config_path);
        if (seed_override) cfg.seed = *seed_override;
    } catch (const ConfigError& e) {
        for (const auto& v : e.violations()) std::cerr << v << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }

    TraceBundle bundle = run(cfg);

    try {
        fs::create_directories(out_dir);
        std::vector<std::pair<std::string, std::string>> digests;
        auto emit = [&](const std::string& name, const std::string& content) {
            write_file(fs::path(out_dir) / name, content);
            digests.emplace_back(name, sha256_hex(content));
        };
        for (std::size_t i = 0; i < bundle.slaves.size(); ++i) {
            const auto& trace = bundle.slaves[i];
            const bool first = i == 0;
            emit(slave_file_name("offsets", ".csv", trace, first), offsets_csv(trace));
            emit(slave_file_name("skew", ".csv", trace, first), skew_csv(trace));
            emit(slave_file_name("ground_truth", ".csv", trace, first),
                 ground_truth_csv(trace));
        }
        emit("summary.json", summary_json(cfg, bundle).dump(2) + "\n");
        const auto manifest = manifest_json(cfg, digests).dump(2) + "\n";
        write_file(fs::path(out_dir) / "manifest.json", manifest);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_report(const std::string& trace_dir, double bin_width_us) {
    if (!(bin_width_us > 0.0)) {
        std::cerr << "bin width must be positive\n";
        return kExitConfig;
    }
    try {
        const TraceTables tables = read_trace_dir(trace_dir);
        if (tables.theta_true_us.size() < 2)
            throw IoError("ground_truth.csv: insufficient samples: need at least 2");

        std::vector<double> gamma_ppm;
        gamma_ppm.reserve(tables.gamma_hat.size());
        for (double g : tables.gamma_hat) gamma_ppm.push_back(g * 1e6);

        write_file(fs::path(trace_dir) / "offset_hist.csv",
                   histogram_csv(make_histogram(tables.theta_hat_us, bin_width_us),
                                 kHistUsHeader));
        write_file(fs::path(trace_dir) / "skew_hist.csv",
                   histogram_csv(make_histogram(gamma_ppm, bin_width_us),
                                 kHistPpmHeader));
        write_file(fs::path(trace_dir) / "truth_hist.csv",
                   histogram_csv(make_histogram(tables.theta_true_us, bin_width_us),
                                 kHistUsHeader));
        write_file(fs::path(trace_dir) / "coverage_table.txt",
                   coverage_table_text(summarize(tables.theta_true_us)));
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace rbis
