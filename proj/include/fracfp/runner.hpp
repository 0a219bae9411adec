#pragma once

#include <iosfwd>
#include <string>

#include "fracfp/config.hpp"

// Experiment execution: builds the discrete problem a config describes,
// delegates to the solvers and the analysis harness, and serializes the
// results.
namespace fracfp::runner {

// body of `fracfp catalog`: every selectable coefficient expression
std::string catalog_text();

// Runs the experiment and writes report.json plus the kind's CSV tables into
// out_dir (created if missing). jobs > 1 executes sweep cases concurrently;
// results land in preassigned grid slots, so the report never depends on
// scheduling. Returns 0 when every assertion passed, 1 otherwise. Solver
// failures throw std::runtime_error naming the failing case, after the
// report files for the completed part have been written.
int run_experiment(const config::ExperimentConfig& cfg,
                   const std::string& out_dir, int jobs, std::ostream& log);

}  // namespace fracfp::runner
