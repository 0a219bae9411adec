#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fracfp/config.hpp"
#include "fracfp/runner.hpp"

// exit codes: 0 success, 1 assertion failure, 2 config error, 3 solver failure
int main(int argc, char** argv) {
    CLI::App app{"time-fractional Fokker-Planck experiment runner"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute an experiment config");
    std::string config_path;
    std::string out_dir = ".";
    std::string alpha_grid;
    std::uint64_t seed = 0;
    int jobs = 1;
    run->add_option("config", config_path, "experiment config file")
        ->required();
    run->add_option("--out", out_dir, "output directory for report files");
    auto* grid_opt = run->add_option(
        "--alpha-grid", alpha_grid,
        "comma-separated alpha grid override (sweep kinds only)");
    auto* seed_opt = run->add_option("--seed", seed, "RNG seed override");
    run->add_option("--jobs", jobs, "max concurrent sweep cases")
        ->check(CLI::PositiveNumber);

    auto* catalog =
        app.add_subcommand("catalog", "list the coefficient expressions");

    CLI11_PARSE(app, argc, argv);

    if (catalog->parsed()) {
        std::cout << fracfp::runner::catalog_text();
        return 0;
    }
    try {
        auto cfg = fracfp::config::parse_config_file(config_path);
        std::optional<std::string> grid_override;
        if (grid_opt->count()) grid_override = alpha_grid;
        std::optional<std::uint64_t> seed_override;
        if (seed_opt->count()) seed_override = seed;
        fracfp::config::apply_overrides(cfg, grid_override, seed_override);
        return fracfp::runner::run_experiment(cfg, out_dir, jobs, std::cout);
    } catch (const fracfp::config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 3;
    }
}
