#pragma once

#include <functional>
#include <vector>

#include "fracfp/fem1d.hpp"
#include "fracfp/trajectory.hpp"

// Fully discrete solvers in time: a DG(0)/DG(1) stepper for fractional
// diffusion with zero convection field, a first-order product-integration
// scheme for a general convection field, and a separated-modes reference
// solution for constant diffusivity.
namespace fracfp::timestep {

struct TimePartition {
    double T = 1.0;
    int N = 1;
    double gamma = 1.0;      // t_n = T (n/N)^gamma
    std::vector<double> t;   // t_0 = 0 .. t_N = T

    static TimePartition graded(double T, int N, double gamma);
    static TimePartition uniform_steps(double T, int N) {
        return graded(T, N, 1.0);
    }
    double step(int n) const { return t[n] - t[n - 1]; }  // k_n, 1 <= n <= N
};

enum class InitialData { L2Projection, RitzProjection, RawNodal };

struct SchemeConfig {
    SchemeConfig(double alpha_, TimePartition partition_, int degree_,
                 fem1d::FeSpace space_)
        : alpha(alpha_),
          partition(std::move(partition_)),
          degree(degree_),
          space(std::move(space_)) {}

    double alpha = 1.0;
    TimePartition partition;
    int degree = 0;  // local polynomial degree in time, 0 or 1
    fem1d::FeSpace space;
    fem1d::CoefficientField fields;
    std::function<double(double)> u0 = [](double) { return 0.0; };
    std::function<double(double)> u0_prime = [](double) { return 0.0; };
    InitialData initial = InitialData::L2Projection;
};

// Solution trajectory of FE coefficient vectors. memory_increments holds the
// per-step values of the memory term of the energy identity as accumulated by
// the DG stepper from its own linear algebra; the general-field scheme leaves
// it empty.
struct DiscreteSolution {
    PiecewiseTrajectory trajectory;
    std::vector<double> initial;  // U^0_-
    std::vector<double> memory_increments;

    int steps() const { return static_cast<int>(trajectory.intervals()); }
    std::vector<double> value_minus(int n) const;  // U^n_-, n = 0..N
    std::vector<double> value_plus(int n) const;   // U^n_+, n = 0..N-1
    std::vector<double> jump(int n) const;         // U^n_+ - U^n_-
};

// initial coefficient vector u_{0X} per cfg.initial
std::vector<double> initial_coefficients(const SchemeConfig& cfg);

// DG time stepping for the diffusion problem (F must vanish identically; a
// sampled nonzero F is rejected). Every memory integral is evaluated in
// closed form through fractional antiderivatives, so no time quadrature
// enters the scheme itself; the source term uses 4-point Gauss per step.
DiscreteSolution dg_solve_diffusion(const SchemeConfig& cfg);

// Piecewise-constant product-integration scheme for a general convection
// field: collocates the time-integrated weak form at the breakpoints, with
// F frozen at interval midpoints inside the outer integral of the drift
// memory term. First order in time by construction.
DiscreteSolution solve_general_F(const SchemeConfig& cfg);

// Dirichlet eigenmode expansion of the diffusion solution for constant
// kappa: sum of a_m E_alpha(-kappa (m pi / L)^2 t^alpha) sin(m pi (x-x_L)/L),
// amplitudes[m-1] = a_m.
struct ModalExpansion {
    double kappa = 1.0;
    double x_left = 0.0;
    double x_right = 1.0;
    std::vector<double> amplitudes;
};

double modal_value(const ModalExpansion& modes, double alpha, double x,
                   double t);
double modal_deriv(const ModalExpansion& modes, double alpha, double x,
                   double t);
// values at the interior nodes of the space grid
std::vector<double> modal_reference(const fem1d::FeSpace& space,
                                    const ModalExpansion& modes, double alpha,
                                    double t);

// L2 norms of the breakpoint jumps and one-sided end values, the raw
// material of the discrete energy inequality
struct JumpAccount {
    std::vector<double> jump_norms;  // ||[U]^j||, j = 0..N-1
    std::vector<double> end_norms;   // ||U^n_-||, n = 0..N
};

JumpAccount jump_and_boundary_accounting(const DiscreteSolution& solution,
                                         const fem1d::FeSpace& space);

}  // namespace fracfp::timestep
