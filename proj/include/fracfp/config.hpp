#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Experiment configuration: a flat TOML-style file with [section] headers and
// key = value lines. Every key is checked against the allowlist of the chosen
// experiment kind; unknown or malformed input is rejected with the offending
// line number.
namespace fracfp::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string kind;  // solve | stability-sweep | gradient-sweep |
                       // energy-check | convergence | lemma-suite
    std::uint64_t seed = 1;

    double x_left = 0.0;
    double x_right = 1.0;

    std::string kappa = "const1";
    std::string F = "zero";
    std::string g = "zero";
    std::string u0 = "zero";

    int M = 15;  // interior nodes
    int N = 16;  // time steps
    int p = 0;   // local degree in time
    double T = 1.0;
    double gamma = 0.0;   // 0 = default rule (see effective_gamma)
    double alpha = 0.5;
    std::vector<double> alpha_grid;  // sweep kinds only
    bool alpha_grid_given = false;   // distinguishes empty-by-override
    double t_star = 0.0;             // 0 = default T/2
    std::vector<int> mesh_family = {7, 15, 31, 63};
    int trials = 100;
};

// Parse and validate a config file. Throws ConfigError with "<path>:<line>"
// diagnostics on malformed input, unknown keys, or out-of-range values.
ExperimentConfig parse_config_file(const std::string& path);

// Same, from an in-memory string; `name` labels diagnostics.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name);

// CLI overrides, applied after parsing and re-validated.
// alpha_grid: comma-separated list; an empty string yields an empty grid.
void apply_overrides(ExperimentConfig& cfg,
                     const std::optional<std::string>& alpha_grid,
                     const std::optional<std::uint64_t>& seed);

// grading exponent actually used: gamma if set, else min(2 / alpha, 4) for
// single-alpha kinds and 2 for grid kinds
double effective_gamma(const ExperimentConfig& cfg);

// evaluation time actually used: t_star if set, else T / 2
double effective_t_star(const ExperimentConfig& cfg);

// Canonical config text: parses back to an identical configuration, with
// every effective value spelled out. Feeding it to parse_config_text
// reproduces the run; it is also the input of the report's config hash.
std::string canonical_text(const ExperimentConfig& cfg);

// FNV-1a hash of the canonical text, as 16 hex digits
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace fracfp::config
