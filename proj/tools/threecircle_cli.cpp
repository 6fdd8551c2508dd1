#include "threecircle/runner/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

namespace tr = threecircle::runner;

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kConfigError = 2;

std::string output_dir(const std::string& flag, const tr::ScenarioConfig& c) {
    if (!flag.empty()) return flag;
    if (!c.output_dir.empty()) return c.output_dir;
    if (const char* env = std::getenv("THREECIRCLE_OUT_DIR"); env && *env) return env;
    return "threecircle-out";
}

int run(const std::string& path, const std::string& out_flag, const tr::Overrides& ov) {
    tr::ScenarioConfig config;
    try {
        config = tr::load_config(path);
        tr::apply_overrides(config, ov);
    } catch (const threecircle::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
    tr::Report report;
    try {
        report = tr::run_scenario(config);
    } catch (const threecircle::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
    const std::string dir = output_dir(out_flag, config);
    try {
        tr::write_outputs(report, dir);
    } catch (const threecircle::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailure;
    }
    for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
    }
    if (!report.error.empty()) std::cout << "ERROR " << report.error << "\n";
    std::cout << config.name << ": " << (report.passed() ? "pass" : "fail") << ", " << report.checks.size()
              << " checks, " << report.artifacts.size() << " CSV files in " << dir << "\n";
    if (!report.passed()) {
        std::cerr << "first failure: " << report.first_failure() << "\n";
        return kCheckFailure;
    }
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for growth of holomorphic functions on Hermitian charts"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_scale;
    std::optional<std::size_t> directions;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario config");
    run_cmd->add_option("config", config_path, "Scenario config (JSON)")->required();
    run_cmd->add_option("--out-dir", out_dir, "Output directory (default: config output_dir, then $THREECIRCLE_OUT_DIR)");
    run_cmd->add_option("--seed", seed, "Override the sampler seed");
    run_cmd->add_option("--tol-scale", tol_scale, "Multiply every tolerance by this factor");
    run_cmd->add_option("--directions", directions, "Override the number of sampled directions");

    app.add_subcommand("list-catalogs", "List metrics, functions, profiles and scenario kinds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (app.got_subcommand("list-catalogs")) {
        std::cout << tr::list_catalogs();
        return kPass;
    }
    return run(config_path, out_dir, {seed, tol_scale, directions});
}
