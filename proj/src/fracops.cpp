#include "fracfp/fracops.hpp"

#include "fracfp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <type_traits>

#include <quadmath.h>

namespace fracfp::fracops {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// C(k, j) for k <= 3
constexpr double kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

// geometric grading toward the left end of a panel group
constexpr double kGrade[10] = {0.0,     1.0 / 256, 1.0 / 128, 1.0 / 64,
                               1.0 / 32, 1.0 / 16,  1.0 / 8,   1.0 / 4,
                               1.0 / 2,  1.0};
constexpr int kGradeN = 10;

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double apply_ip(const InnerProduct& ip, const std::vector<double>& x,
                const std::vector<double>& y) {
    return ip ? ip(x, y) : dot(x, y);
}

// Tail sums S_k with int_0^U u^k (1-u)^{mu-1} du = U^{k+1} S_k,
// S_k = sum_m [(1-mu)_m / m!] U^m / (k+1+m). All k share one
// Pochhammer/power stream; for integer mu the stream terminates and the
// sums are exact. Requires U in [0, 1]; used for U <= 1/2 where every
// term ratio is at most 1/2 and no cancellation occurs.
void beta_tail_sums(double mu, double U, int deg, double* S) {
    long double acc[4] = {0.0L, 0.0L, 0.0L, 0.0L};
    long double poch = 1.0L;  // (1-mu)_m / m!
    long double upow = 1.0L;  // U^m
    for (int m = 0; m < 2000; ++m) {
        const long double base = poch * upow;
        for (int k = 0; k <= deg; ++k) acc[k] += base / (k + 1 + m);
        if (m > 1 && fabsl(base) <= 1e-19L * fabsl(acc[0])) break;
        poch *= (1.0L - mu + m) / (m + 1);
        if (poch == 0.0L) break;  // integer mu: remaining terms vanish
        upow *= U;
    }
    for (int k = 0; k <= deg; ++k) S[k] = static_cast<double>(acc[k]);
}

// Adds to `out` the contribution of interval n to (I^mu phi)(t). Exact per
// polynomial piece. Two regimes: when the interval covers less than half of
// [a, t] the incomplete-beta series above is stable; otherwise the direct
// difference of endpoint powers loses at most one bit and is evaluated in
// long double.
void add_interval_contribution(std::vector<double>& out,
                               const PiecewiseTrajectory& phi, int n, double mu,
                               double t, double gamma_mu, bool mu_integer) {
    const auto& bp = phi.breakpoints();
    const double a = bp[n];
    const double b = bp[n + 1];
    const double bprime = std::min(b, t);
    const double h = b - a;
    const int deg = phi.degree(n);
    const double A = t - a;  // > 0
    const double len = bprime - a;
    const double U = len / A;

    double contrib[4] = {0.0, 0.0, 0.0, 0.0};
    if (U <= 0.5 || mu_integer) {
        double S[4];
        beta_tail_sums(mu, U, deg, S);
        const double lead = std::pow(A, mu - 1.0) * len / gamma_mu;
        double ratio_pow = 1.0;  // (len/h)^k
        for (int k = 0; k <= deg; ++k) {
            contrib[k] = lead * ratio_pow * S[k];
            ratio_pow *= len / h;
        }
    } else {
        // A < 2 len <= 2h here, so the alternating sums below are benign
        const long double Al = static_cast<long double>(t) - a;
        const long double Bl = static_cast<long double>(t) - bprime;  // >= 0
        long double D[4];
        for (int j = 0; j <= deg; ++j) {
            const long double e = static_cast<long double>(mu) + j;
            const long double bpow = Bl > 0.0L ? powl(Bl, e) : 0.0L;
            D[j] = (powl(Al, e) - bpow) / e;
        }
        for (int k = 0; k <= deg; ++k) {
            long double s = 0.0L;
            for (int j = 0; j <= k; ++j) {
                const long double sgn = (j & 1) ? -1.0L : 1.0L;
                s += kBinom[k][j] * sgn * powl(Al, static_cast<long double>(k - j)) * D[j];
            }
            contrib[k] = static_cast<double>(
                s / (powl(static_cast<long double>(h), static_cast<long double>(k)) *
                     static_cast<long double>(gamma_mu)));
        }
    }

    const auto& blocks = phi.coeff_block(n);
    const std::size_t dim = out.size();
    for (int aa = 0; aa <= deg; ++aa) {
        double w = 0.0;
        for (int k = 0; k <= aa; ++k) w += PiecewiseTrajectory::MONO[aa][k] * contrib[k];
        const auto& c = blocks[aa];
        for (std::size_t i = 0; i < dim; ++i) out[i] += w * c[i];
    }
}

// (I^mu phi)(t) with phi treated as zero beyond its final breakpoint.
std::vector<double> frac_core(const PiecewiseTrajectory& phi, double mu, double t) {
    std::vector<double> out(phi.dim(), 0.0);
    if (t <= 0.0) return out;
    const double gamma_mu = std::tgamma(mu);
    const bool mu_integer = std::abs(mu - std::round(mu)) < 1e-13;
    const int nint = static_cast<int>(phi.intervals());
    const auto& bp = phi.breakpoints();
    for (int n = 0; n < nint; ++n) {
        if (bp[n] >= t) break;
        add_interval_contribution(out, phi, n, mu, t, gamma_mu, mu_integer);
    }
    return out;
}

void check_order(double mu) {
    if (!(mu >= 0.0) || mu > 4.0)
        throw std::domain_error("frac_integral: order must lie in [0, 4]");
}

// end time with one-ulp forgiveness for t accumulated by summation
double clamp_to_horizon(const PiecewiseTrajectory& phi, double t, bool allow_zero) {
    const double T = phi.end_time();
    const double slack = 1e-12 * std::max(1.0, T);
    if (std::isnan(t) || t > T + slack || (allow_zero ? t < 0.0 : t <= 0.0))
        throw std::domain_error("frac operator: time outside trajectory span");
    return std::min(t, T);
}

void check_continuity(const PiecewiseTrajectory& phi, const char* who) {
    const double tol = 1e-10 * std::max(1.0, phi.coeff_scale());
    if (phi.max_interior_jump() > tol)
        throw std::invalid_argument(std::string(who) +
                                    ": trajectory must be continuous");
}

template <class Real>
Real r_lgamma(Real x) {
    if constexpr (std::is_same_v<Real, __float128>)
        return lgammaq(x);
    else
        return lgammal(x);
}

template <class Real>
Real r_exp(Real x) {
    if constexpr (std::is_same_v<Real, __float128>)
        return expq(x);
    else
        return expl(x);
}

template <class Real>
Real r_log(Real x) {
    if constexpr (std::is_same_v<Real, __float128>)
        return logq(x);
    else
        return logl(x);
}

// Kahan-compensated power series sum_n z^n / Gamma(1 + n mu). Terms are
// unimodal in magnitude; stop once past the peak and negligible against it.
// The peak bounds the achievable absolute accuracy, which is why the caller
// picks the precision type based on |z|^{1/mu}.
template <class Real>
double ml_series_sum(double mu_d, double z_d) {
    const Real mu = static_cast<Real>(mu_d);
    const Real z = static_cast<Real>(z_d);
    const Real az = z < Real(0) ? -z : z;
    const Real lz = r_log(az);
    const Real tol = std::is_same_v<Real, long double> ? Real(1e-24) : Real(1e-36);
    Real sum = Real(1), comp = Real(0), peak = Real(1), prev = Real(1);
    for (long n = 1; n < 4000000L; ++n) {
        const Real lt = Real(n) * lz - r_lgamma(Real(1) + Real(n) * mu);
        if (lt > Real(11300)) return std::numeric_limits<double>::infinity();
        Real term = r_exp(lt);
        const bool shrinking = term < prev;
        prev = term;
        if (term > peak) peak = term;
        if (z < Real(0) && (n & 1)) term = -term;
        const Real y = term - comp;
        const Real s2 = sum + y;
        comp = (s2 - sum) - y;
        sum = s2;
        if (shrinking && prev <= tol * peak) return static_cast<double>(sum);
    }
    throw std::runtime_error("mittag_leffler: power series failed to converge");
}

// Divergent large-|z| expansion E_mu(z) ~ -sum_k z^{-k} / Gamma(1 - k mu)
// for z << 0, summed until the first omitted term magnitude (computed
// sine-free via reflection, so sin(pi k mu) ~ 0 cannot mask divergence)
// drops below 1e-10. Fails, returning false, when optimal truncation is
// reached first.
bool ml_asymptotic(double mu, double z, double& out) {
    const long double x = -static_cast<long double>(z);
    const long double lx = logl(x);
    const long double pil = 3.141592653589793238462643383279502884L;
    long double sum = 0.0L, comp = 0.0L;
    long double prev_env = std::numeric_limits<long double>::infinity();
    for (long k = 1; k <= 200000L; ++k) {
        const long double km = static_cast<long double>(k) * mu;
        const long double lenv = r_lgamma<long double>(km) - k * lx;
        const long double env = expl(lenv) / pil;
        if (k >= 2 && env <= 1e-10L) {
            out = static_cast<double>(sum);
            return true;
        }
        if (env > prev_env) return false;
        prev_env = env;
        // 1/Gamma(1 - k mu) = Gamma(k mu) sin(pi k mu) / pi with the sine
        // argument reduced: k mu = P + r, |r| <= 1/2
        const long double P = roundl(km);
        const long double r = km - P;
        long double term = env * sinl(pil * r);
        if ((k + static_cast<long long>(P)) % 2 == 0) term = -term;
        const long double y = term - comp;
        const long double s2 = sum + y;
        comp = (s2 - sum) - y;
        sum = s2;
    }
    return false;
}

// shared Gauss-4 panel loop over one interval [a, b], graded toward a
template <class Fn>
double graded_panels(const Fn& f, double a, double b) {
    const auto& g4 = linalg::gauss_rule(4);
    const double L = b - a;
    double acc = 0.0;
    for (int p = 0; p + 1 < kGradeN; ++p) {
        const double p0 = a + L * kGrade[p];
        const double dp = L * (kGrade[p + 1] - kGrade[p]);
        for (std::size_t q = 0; q < g4.nodes.size(); ++q)
            acc += g4.weights[q] * dp * f(p0 + dp * g4.nodes[q]);
    }
    return acc;
}

std::vector<double>& axpy(std::vector<double>& y, double a,
                          const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
    return y;
}

// One integration-by-parts block of the memory integral
// int_a^{b'} <phi, (I^alpha phi)'> ds; see rl_energy_integral.
double energy_increment(const PiecewiseTrajectory& phi,
                        const PiecewiseTrajectory& mphi,
                        const PiecewiseTrajectory& dphi, double alpha,
                        const InnerProduct& ip, int n, double bprime) {
    const auto& bp = phi.breakpoints();
    const double a = bp[n];
    const double h = bp[n + 1] - a;
    const std::size_t dim = phi.dim();
    const std::vector<double> zero(dim, 0.0);

    double acc = apply_ip(ip, phi.eval(bprime), frac_core(phi, alpha, bprime));
    acc -= apply_ip(ip, phi.value_right(n),
                    a > 0.0 ? frac_core(phi, alpha, a) : zero);

    // phi'(s) = Avec + Bvec s on this piece (phi has degree <= 2)
    const auto& dblk = dphi.coeff_block(n);
    std::vector<double> a_xi = dblk[0];
    std::vector<double> b_xi(dim, 0.0);
    if (dphi.degree(n) >= 1) {
        b_xi = dblk[1];
        axpy(b_xi, 1.0, dblk[1]);  // b_xi = 2 d1
        axpy(a_xi, -1.0, dblk[1]);
    }
    std::vector<double> avec = a_xi;
    axpy(avec, -a / h, b_xi);
    std::vector<double> bvec = b_xi;
    for (auto& v : bvec) v /= h;

    // int_a^{b'} I^a phi ds = I^{a+1} phi |_a^{b'}
    std::vector<double> d1 = frac_core(phi, alpha + 1.0, bprime);
    if (a > 0.0) axpy(d1, -1.0, frac_core(phi, alpha + 1.0, a));
    acc -= apply_ip(ip, avec, d1);

    // int_0^x s (I^a phi)(s) ds = I^{a+1}(s phi)(x) + alpha I^{a+2} phi(x)
    std::vector<double> d2 = frac_core(mphi, alpha + 1.0, bprime);
    axpy(d2, alpha, frac_core(phi, alpha + 2.0, bprime));
    if (a > 0.0) {
        axpy(d2, -1.0, frac_core(mphi, alpha + 1.0, a));
        axpy(d2, -alpha, frac_core(phi, alpha + 2.0, a));
    }
    acc -= apply_ip(ip, bvec, d2);
    return acc;
}

void check_energy_degree(const PiecewiseTrajectory& phi) {
    for (int n = 0; n < static_cast<int>(phi.intervals()); ++n)
        if (phi.degree(n) > 2)
            throw std::invalid_argument(
                "rl_energy_integral: trajectory degree must be <= 2");
}

}  // namespace

double omega(double mu, double t) {
    if (!(mu > 0.0) || mu > 4.0)
        throw std::domain_error("omega: order must lie in (0, 4]");
    if (std::isnan(t) || t < 0.0 || (t == 0.0 && mu < 1.0))
        throw std::domain_error("omega: kernel weight undefined at this time");
    if (t == 0.0) return mu == 1.0 ? 1.0 : 0.0;
    return std::pow(t, mu - 1.0) / std::tgamma(mu);
}

FracKernel::FracKernel(double order) : mu(order) {
    if (!(mu > 0.0) || mu > 2.0)
        throw std::domain_error("FracKernel: order must lie in (0, 2]");
    gamma_mu = std::tgamma(mu);
    gamma_mu_plus1 = std::tgamma(mu + 1.0);
    gamma_mu_plus2 = std::tgamma(mu + 2.0);
}

double FracKernel::omega_at(double t) const { return omega(mu, t); }

std::vector<double> frac_integral_eval(const PiecewiseTrajectory& phi, double mu,
                                       double t) {
    check_order(mu);
    const double tc = clamp_to_horizon(phi, t, /*allow_zero=*/true);
    if (mu == 0.0) return phi.eval(tc);
    return frac_core(phi, mu, tc);
}

std::vector<double> frac_integral_zero_extended(const PiecewiseTrajectory& phi,
                                                double mu, double t) {
    check_order(mu);
    if (std::isnan(t) || t < 0.0)
        throw std::domain_error("frac operator: time must be nonnegative");
    if (mu == 0.0)
        return t > phi.end_time() ? std::vector<double>(phi.dim(), 0.0)
                                  : phi.eval(t);
    return frac_core(phi, mu, t);
}

std::vector<double> rl_derivative_eval(const PiecewiseTrajectory& phi, double alpha,
                                       double t) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("rl_derivative_eval: alpha must lie in (0, 1]");
    const double tc = clamp_to_horizon(phi, t, /*allow_zero=*/false);
    check_continuity(phi, "rl_derivative_eval");
    if (alpha == 1.0) return phi.eval(tc);
    // d^{1-a} phi = phi(0) w_a(t) + I^a phi'
    std::vector<double> out = frac_core(phi.derivative(), alpha, tc);
    axpy(out, omega(alpha, tc), phi.value_right(0));
    return out;
}

std::vector<double> operator_b1(const PiecewiseTrajectory& phi,
                                const std::function<double(double)>& F,
                                const std::function<double(double)>& Fdot,
                                double alpha, double t) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("operator_b1: alpha must lie in (0, 1]");
    const double tc = clamp_to_horizon(phi, t, /*allow_zero=*/true);
    check_continuity(phi, "operator_b1");
    const std::size_t dim = phi.dim();
    if (tc == 0.0) return std::vector<double>(dim, 0.0);

    // F(t) (I^a phi)(t) - int_0^t F'(s) (I^a phi)(s) ds
    std::vector<double> out = frac_core(phi, alpha, tc);
    const double f_end = F(tc);
    for (auto& v : out) v *= f_end;

    const auto& bp = phi.breakpoints();
    const auto& g4 = linalg::gauss_rule(4);
    for (int n = 0; n < static_cast<int>(phi.intervals()); ++n) {
        const double a = bp[n];
        if (a >= tc) break;
        const double b = std::min(bp[n + 1], tc);
        const double L = b - a;
        for (int p = 0; p + 1 < kGradeN; ++p) {
            const double p0 = a + L * kGrade[p];
            const double dp = L * (kGrade[p + 1] - kGrade[p]);
            for (std::size_t q = 0; q < g4.nodes.size(); ++q) {
                const double s = p0 + dp * g4.nodes[q];
                const double w = -g4.weights[q] * dp * Fdot(s);
                axpy(out, w, frac_core(phi, alpha, s));
            }
        }
    }
    return out;
}

double mittag_leffler(double mu, double z) {
    if (!(mu > 0.0) || mu > 1.0)
        throw std::domain_error("mittag_leffler: order must lie in (0, 1]");
    if (std::isnan(z) || z < -1.0e4 || z > 10.0)
        throw std::domain_error("mittag_leffler: argument outside [-1e4, 10]");
    if (mu == 1.0) return std::exp(z);
    if (z == 0.0) return 1.0;
    if (z > 0.0) return ml_series_sum<long double>(mu, z);

    // x = |z|^{1/mu} governs both the asymptotic reach (error ~ e^{-x}) and
    // the series cancellation (term peak ~ e^{x} / mu)
    const double lnx = std::log(-z) / mu;
    if (lnx >= std::log(19.0)) {
        double out = 0.0;
        if (ml_asymptotic(mu, z, out)) return out;
    }
    const double x = std::exp(lnx);  // +inf is fine: asymptotic took that case
    if (x <= 19.5 + std::log(mu)) return ml_series_sum<long double>(mu, z);
    return ml_series_sum<__float128>(mu, z);
}

double gronwall_bound(double a, double b, double mu, double t) {
    if (a < 0.0 || b < 0.0 || std::isnan(a) || std::isnan(b))
        throw std::domain_error("gronwall_bound: coefficients must be nonnegative");
    if (!(mu > 0.0) || mu > 1.0)
        throw std::domain_error("gronwall_bound: order must lie in (0, 1]");
    if (std::isnan(t) || t < 0.0)
        throw std::domain_error("gronwall_bound: time must be nonnegative");
    return a * mittag_leffler(mu, b * std::pow(t, mu));
}

double history_inner_integral(const PiecewiseTrajectory& phi, double mu, double t,
                              const InnerProduct& ip) {
    if (!(mu > 0.0) || mu > 2.0)
        throw std::domain_error("history_inner_integral: order must lie in (0, 2]");
    const double tc = clamp_to_horizon(phi, t, /*allow_zero=*/true);
    if (tc == 0.0) return 0.0;
    const auto& bp = phi.breakpoints();
    double acc = 0.0;
    for (int n = 0; n < static_cast<int>(phi.intervals()); ++n) {
        const double a = bp[n];
        if (a >= tc) break;
        const double b = std::min(bp[n + 1], tc);
        acc += graded_panels(
            [&](double s) {
                return apply_ip(ip, phi.eval(s), frac_core(phi, mu, s));
            },
            a, b);
    }
    return acc;
}

double rl_energy_integral(const PiecewiseTrajectory& phi, double alpha, double t,
                          const InnerProduct& ip) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("rl_energy_integral: alpha must lie in (0, 1]");
    const double tc = clamp_to_horizon(phi, t, /*allow_zero=*/true);
    if (tc == 0.0) return 0.0;
    check_energy_degree(phi);
    const PiecewiseTrajectory mphi = phi.multiply_by_time();
    const PiecewiseTrajectory dphi = phi.derivative();
    const auto& bp = phi.breakpoints();
    double acc = 0.0;
    for (int n = 0; n < static_cast<int>(phi.intervals()); ++n) {
        if (bp[n] >= tc) break;
        acc += energy_increment(phi, mphi, dphi, alpha, ip, n,
                                std::min(bp[n + 1], tc));
    }
    return acc;
}

std::vector<double> rl_energy_increments(const PiecewiseTrajectory& phi,
                                         double alpha, const InnerProduct& ip) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("rl_energy_increments: alpha must lie in (0, 1]");
    check_energy_degree(phi);
    const PiecewiseTrajectory mphi = phi.multiply_by_time();
    const PiecewiseTrajectory dphi = phi.derivative();
    const auto& bp = phi.breakpoints();
    std::vector<double> out(phi.intervals(), 0.0);
    for (int n = 0; n < static_cast<int>(phi.intervals()); ++n)
        out[n] = energy_increment(phi, mphi, dphi, alpha, ip, n, bp[n + 1]);
    return out;
}

double omega_weighted_quad(const std::function<double(double)>& f, double mu,
                           double t, const std::vector<double>& interior_points) {
    if (!(mu > 0.0) || mu > 2.0)
        throw std::domain_error("omega_weighted_quad: order must lie in (0, 2]");
    if (!(t > 0.0))
        throw std::domain_error("omega_weighted_quad: time must be positive");

    std::vector<double> breaks{0.0};
    for (double p : interior_points)
        if (p > 0.0 && p < t) breaks.push_back(p);
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(t);

    double acc = 0.0;
    // smooth-kernel part: every subinterval except the one touching t
    for (std::size_t n = 0; n + 2 < breaks.size(); ++n)
        acc += graded_panels([&](double s) { return omega(mu, t - s) * f(s); },
                             breaks[n], breaks[n + 1]);

    // Final subinterval [a, t]: s = t - (t-a) v^{1/mu} removes the kernel
    // singularity exactly. The v-integrand is rough at both ends (v^{1/mu}
    // curvature at 0, f's kink at a mapping to v = 1), so grade both ways.
    const double a = breaks[breaks.size() - 2];
    const double inv_mu = 1.0 / mu;
    const auto vf = [&](double v) { return f(t - (t - a) * std::pow(v, inv_mu)); };
    const auto& g4 = linalg::gauss_rule(4);
    double tail = graded_panels(vf, 0.0, 0.5);
    for (int p = 0; p + 1 < kGradeN; ++p) {
        const double v0 = 1.0 - 0.5 * kGrade[kGradeN - 1 - p];
        const double v1 = 1.0 - 0.5 * kGrade[kGradeN - 2 - p];
        for (std::size_t q = 0; q < g4.nodes.size(); ++q) {
            const double v = v0 + (v1 - v0) * g4.nodes[q];
            tail += g4.weights[q] * (v1 - v0) * vf(v);
        }
    }
    acc += std::pow(t - a, mu) / (mu * std::tgamma(mu)) * tail;
    return acc;
}

double graded_panel_quad(const std::function<double(double)>& f, double a,
                         double b) {
    if (!(b > a)) throw std::invalid_argument("graded_panel_quad: empty interval");
    return graded_panels(f, a, b);
}

}  // namespace fracfp::fracops
