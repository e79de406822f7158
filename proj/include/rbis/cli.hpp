#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rbis {

// Exit codes shared by both subcommands: 0 ok, 2 configuration problem,
// 3 I/O or trace problem.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

// run --config PATH --out DIR [--seed N]
// Writes offsets.csv, skew.csv, ground_truth.csv, summary.json and
// manifest.json into DIR. Nothing is written unless the config is valid.
int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override);

// report --in DIR [--bin-width-us W]
// Reads the three trace files from DIR and writes offset_hist.csv,
// skew_hist.csv, truth_hist.csv and coverage_table.txt next to them.
int cmd_report(const std::string& trace_dir, double bin_width_us);

}  // namespace rbis
