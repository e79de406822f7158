#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "rbis/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"RBIS beacon-referenced clock synchronization simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Simulate a scenario and write traces");
    run->add_option("--config", config_path, "Scenario config file")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override the scenario seed");

    std::string trace_dir;
    double bin_width_us = 1.0;
    auto* report =
        app.add_subcommand("report", "Build histograms and a coverage table from traces");
    report->add_option("--in", trace_dir, "Directory with run traces")->required();
    report->add_option("--bin-width-us", bin_width_us, "Histogram bin width");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return rbis::cmd_run(config_path, out_dir, seed);
    return rbis::cmd_report(trace_dir, bin_width_us);
}
