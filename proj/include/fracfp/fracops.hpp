#pragma once

#include "fracfp/trajectory.hpp"

#include <functional>
#include <vector>

namespace fracfp::fracops {

// inner product on coefficient vectors; empty means the dot product
using InnerProduct =
    std::function<double(const std::vector<double>&, const std::vector<double>&)>;

// kernel weight w_mu(t) = t^{mu-1} / Gamma(mu)
double omega(double mu, double t);

// Cached Gamma values for a fixed kernel order in (0, 2].
struct FracKernel {
    explicit FracKernel(double mu);
    double mu;
    double gamma_mu;        // Gamma(mu)
    double gamma_mu_plus1;  // Gamma(mu+1)
    double gamma_mu_plus2;  // Gamma(mu+2)
    double omega_at(double t) const;
};

// (I^mu phi)(t) = int_0^t w_mu(t-s) phi(s) ds, exact for piecewise
// polynomials; mu = 0 returns phi(t) with the left-limit convention.
// Requires 0 <= t <= phi.end_time().
std::vector<double> frac_integral_eval(const PiecewiseTrajectory& phi, double mu,
                                       double t);

// Same integral for phi extended by zero beyond its final breakpoint; t may
// exceed phi.end_time(). The time steppers use this to treat the computed
// history as a trajectory while the current interval is still unknown.
std::vector<double> frac_integral_zero_extended(const PiecewiseTrajectory& phi,
                                                double mu, double t);

// Riemann-Liouville derivative of order 1-alpha via
// phi(0) w_alpha(t) + (I^alpha phi')(t); phi must be continuous.
// alpha = 1 returns phi(t) exactly.
std::vector<double> rl_derivative_eval(const PiecewiseTrajectory& phi, double alpha,
                                       double t);

// B1 phi (t) = int_0^t F(s) (d_s^{1-alpha} phi)(s) ds, evaluated through the
// integration-by-parts form F(t)(I^a phi)(t) - int_0^t F'(s)(I^a phi)(s) ds.
// F and Fdot are scalar samplers in time applied componentwise; the outer
// integral uses composite Gauss panels per trajectory interval.
std::vector<double> operator_b1(const PiecewiseTrajectory& phi,
                                const std::function<double(double)>& F,
                                const std::function<double(double)>& Fdot,
                                double alpha, double t);

// E_mu(z) = sum_n z^n / Gamma(1+n mu) for 0 < mu <= 1 and -1e4 <= z <= 10,
// absolute accuracy 1e-8 on that range. mu = 1 returns exp(z) exactly.
// Values whose magnitude exceeds double range come back as +infinity.
double mittag_leffler(double mu, double z);

// a * E_mu(b t^mu): the fractional Gronwall bound for constant data.
double gronwall_bound(double a, double b, double mu, double t);

// int_0^t <phi(s), (I^mu phi)(s)>_ip ds. The inner integral is exact; the
// outer one uses composite Gauss panels graded toward each interval's left
// endpoint, where (s - t_j)^mu terms blunt plain Gauss accuracy.
double history_inner_integral(const PiecewiseTrajectory& phi, double mu, double t,
                              const InnerProduct& ip = {});

// int_0^t <phi(s), d/ds (I^alpha phi)(s)>_ip ds, evaluated in closed form by
// integration by parts on each interval; jumps in phi are permitted. This is
// the memory term of the discrete energy identity. Degree <= 2 per interval.
double rl_energy_integral(const PiecewiseTrajectory& phi, double alpha, double t,
                          const InnerProduct& ip = {});

// Per-interval increments c_m of the same integral: rl_energy_integral at a
// breakpoint t_n equals the sum of c_1..c_n. One pass costs O(N^2 dim).
std::vector<double> rl_energy_increments(const PiecewiseTrajectory& phi,
                                         double alpha, const InnerProduct& ip = {});

// int_0^t w_mu(t-s) f(s) ds for a scalar integrand with possible kinks at
// the given interior points. The weakly singular final subinterval is
// handled by the substitution s = t - (t-a) v^{1/mu}, which removes the
// kernel singularity exactly.
double omega_weighted_quad(const std::function<double(double)>& f, double mu,
                           double t, const std::vector<double>& interior_points);

// Composite Gauss-4 panels on [a,b], geometrically graded toward a. Shared
// by the quadrature-based operations above; exposed for the experiment
// harness, which uses the same rule for its time integrals.
double graded_panel_quad(const std::function<double(double)>& f, double a, double b);

}  // namespace fracfp::fracops
