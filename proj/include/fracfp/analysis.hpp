#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fracfp/timestep.hpp"

// Experiment harness: turns the stability, energy, and convergence statements
// behind the solvers into measured numbers with signed slack, so that every
// inequality the code relies on is checkable on demand.
namespace fracfp::analysis {

// psi(a) = pi^(a-1) (2-a)^(2-a) (1-a)^(a-1) / sin(pi a / 2), extended by its
// limit psi(1) = 1. Appears as the alpha-dependent factor of the source term
// in the energy bound; grows like 8 / (pi^2 a) as a -> 0.
double psi(double alpha);

// One data scenario for a sweep: initial profile and source. The derivative
// is only consulted when the base configuration asks for the Ritz projector.
struct DataCase {
    std::string label;
    std::function<double(double)> u0 = [](double) { return 0.0; };
    std::function<double(double)> u0_prime = [](double) { return 0.0; };
    std::function<double(double, double)> g = [](double, double) {
        return 0.0;
    };
};

struct StabilityRecord {
    double alpha = 0.0;
    std::string label;
    double measure = 0.0;     // max_n ||U^n|| or t*^(a/2) ||grad U(t*)||
    double functional = 0.0;  // ||u_0X|| + int ||g|| + (t^-1 int ||s g||^2)^(1/2)
    double ratio = 0.0;       // measure / functional; 0 when both vanish
    std::string error;        // nonempty when the solve failed
};

struct StabilityReport {
    std::vector<StabilityRecord> records;
    // sweep geometry, for reproducing a record in isolation
    timestep::TimePartition partition;
    int dof = 0;
    double max_h = 0.0;
    int degree = 0;
    bool drift = false;  // whether the convection field was active
};

// Runs the solver per (alpha, case) and reports max_n ||U^n_-|| against the
// data functional at t = T. A vanishing convection field routes to the DG
// stepper, anything else to the general scheme. Solver failures are recorded
// per record and the sweep continues.
StabilityReport stability_sweep(const timestep::SchemeConfig& base,
                                const std::vector<double>& alpha_grid,
                                const std::vector<DataCase>& cases);

// Same sweep, but measures t*^(alpha/2) ||grad U(t*)|| against the data
// functional at t = t*. Requires 0 < t* <= T.
StabilityReport gradient_sweep(const timestep::SchemeConfig& base,
                               const std::vector<double>& alpha_grid,
                               const std::vector<DataCase>& cases,
                               double t_star);

// Term-by-term evaluation of the discrete energy inequality
//   ||U^n_-||^2 + sum_j ||[U]^j||^2 + memory(t_n)
//     <= ||u_0X||^2 + C_Omega psi(alpha) / (kappa_min t_n^(1-alpha))
//        * int_0^(t_n) ||g||^2,
// one row per time level.
struct EnergyLedger {
    std::vector<double> times;    // t_n, n = 1..N
    std::vector<double> end_sq;   // ||U^n_-||^2
    std::vector<double> jump_sq;  // sum_{j<n} ||[U]^j||^2
    std::vector<double> memory;   // solver's accumulated memory integral
    std::vector<double> rhs;
    std::vector<double> slack;  // rhs - (end_sq + jump_sq + memory)
    double initial_sq = 0.0;
    double scale = 0.0;
    double worst_slack = 0.0;
    bool pass = false;  // every slack >= -1e-8 * scale
};

// The solution must come from dg_solve_diffusion (it carries the per-step
// memory increments); cfg must be the configuration it was solved with.
EnergyLedger energy_check(const timestep::DiscreteSolution& solution,
                          const timestep::SchemeConfig& cfg);

// Space-refinement errors against the separated-modes solution at t*, on
// uniform meshes, with the time grid fixed and fine. Slopes are least-squares
// fits of log(err) against log(h); with fewer than two rows they stay NaN.
// temporal_contamination flags a slope shift above 0.1 when the study is
// repeated with half the time steps, which means the time grid is too coarse
// for the reported slopes to be spatial.
struct RateTable {
    std::vector<double> h;
    std::vector<double> err_l2;
    std::vector<double> err_h1;
    double slope_l2 = std::numeric_limits<double>::quiet_NaN();
    double slope_h1 = std::numeric_limits<double>::quiet_NaN();
    bool temporal_contamination = false;
};

RateTable convergence_study(double alpha, const timestep::ModalExpansion& modes,
                            const std::vector<int>& interior_node_counts,
                            const timestep::TimePartition& fine_partition,
                            double t_star);

// Randomized checks of the inequality toolbox underneath the stability
// results. Each check draws `trials` random piecewise-polynomial trajectories
// and parameters within the hypotheses, evaluates both sides, and keeps the
// worst signed slack (rhs - lhs, so negative means violated).
struct LemmaCheck {
    std::string name;
    int trials = 0;
    double worst_slack = 0.0;
    double scale = 0.0;  // magnitude the tolerance is relative to
    bool pass = false;
};

struct LemmaReport {
    std::vector<LemmaCheck> checks;
    bool pass = false;
};

LemmaReport lemma_property_suite(std::uint64_t seed, int trials);

// Measures int_0^T ||B1 phi||^2 / int_0^T ||I^alpha phi||^2 for piecewise
// linear interpolants of `profile` on 2, 4, ..., 2^levels intervals; the
// drift memory operator is bounded by the fractional integral, so the ratio
// must stay bounded as the family is refined.
struct RatioProbe {
    std::vector<double> ratios;  // one per refinement level
    bool bounded = false;        // ratios[k+1] <= 1.1 ratios[k] for k >= 2
};

RatioProbe b_operator_ratio_probe(const std::function<double(double)>& profile,
                                  int levels, double alpha, double T,
                                  const std::function<double(double)>& F,
                                  const std::function<double(double)>& Fdot);

}  // namespace fracfp::analysis
