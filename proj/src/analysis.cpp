#include "fracfp/analysis.hpp"

#include "fracfp/fracops.hpp"
#include "fracfp/linalg.hpp"
#include "fracfp/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracfp::analysis {

namespace {

namespace fem = fem1d;
namespace ops = fracops;
namespace ts = timestep;

constexpr double kPi = std::numbers::pi;

// L2(Omega) norm of a continuous profile, by Gauss-5 per mesh element
double profile_l2(const fem::FeSpace& space,
                  const std::function<double(double)>& f) {
    const auto& rule = linalg::gauss_rule(5);
    const auto& nodes = space.mesh.nodes;
    double acc = 0.0;
    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        const double h = nodes[e + 1] - nodes[e];
        double cell = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double v = f(nodes[e] + h * rule.nodes[q]);
            cell += rule.weights[q] * v * v;
        }
        acc += h * cell;
    }
    return std::sqrt(acc);
}

// time panels: given breakpoints clipped to (0, t_limit), closed at both ends
std::vector<double> clipped_times(const std::vector<double>& t,
                                  double t_limit) {
    std::vector<double> out{0.0};
    for (double v : t)
        if (v > 0.0 && v < t_limit) out.push_back(v);
    out.push_back(t_limit);
    return out;
}

// ||u_0X|| + int_0^t ||g|| ds + (t^-1 int_0^t ||s g(s)||^2 ds)^(1/2)
double data_functional(const fem::FeSpace& space,
                       const std::vector<double>& u0x,
                       const std::function<double(double, double)>& g,
                       const std::vector<double>& times, double t_limit) {
    const auto panels = clipped_times(times, t_limit);
    const auto& rule = linalg::gauss_rule(4);
    double int_g = 0.0, int_sg_sq = 0.0;
    for (std::size_t p = 0; p + 1 < panels.size(); ++p) {
        const double len = panels[p + 1] - panels[p];
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = panels[p] + len * rule.nodes[q];
            const double w = len * rule.weights[q];
            const double gn =
                profile_l2(space, [&](double x) { return g(x, s); });
            int_g += w * gn;
            int_sg_sq += w * s * s * gn * gn;
        }
    }
    return fem::fe_norms(space, u0x).l2 + int_g +
           std::sqrt(int_sg_sq / t_limit);
}

bool has_drift(const ts::SchemeConfig& cfg) {
    const auto& mesh = cfg.space.mesh;
    for (double fx : {0.21, 0.5, 0.83}) {
        const double x = mesh.x_left() + fx * (mesh.x_right() - mesh.x_left());
        for (double ft : {0.0, 0.47, 1.0})
            if (cfg.fields.F(x, ft * cfg.partition.T) != 0.0) return true;
    }
    return false;
}

void validate_sweep_inputs(const std::vector<double>& alpha_grid,
                           const std::vector<DataCase>& cases) {
    if (alpha_grid.empty())
        throw std::invalid_argument("sweep: alpha grid is empty");
    for (double a : alpha_grid)
        if (!(a > 0.0) || a > 1.0)
            throw std::invalid_argument("sweep: alpha outside (0, 1]");
    if (cases.empty())
        throw std::invalid_argument("sweep: need at least one data case");
}

StabilityReport sweep_common(const ts::SchemeConfig& base,
                             const std::vector<double>& alpha_grid,
                             const std::vector<DataCase>& cases,
                             double t_star, bool gradient) {
    validate_sweep_inputs(alpha_grid, cases);
    StabilityReport rep;
    rep.partition = base.partition;
    rep.dof = base.space.dof();
    rep.max_h = base.space.mesh.max_h();
    rep.degree = base.degree;
    rep.drift = has_drift(base);

    for (double alpha : alpha_grid)
        for (const auto& dc : cases) {
            StabilityRecord rec;
            rec.alpha = alpha;
            rec.label = dc.label;
            auto cfg = base;
            cfg.alpha = alpha;
            cfg.u0 = dc.u0;
            cfg.u0_prime = dc.u0_prime;
            cfg.fields.g = dc.g;
            try {
                const auto sol = rep.drift ? ts::solve_general_F(cfg)
                                           : ts::dg_solve_diffusion(cfg);
                if (gradient) {
                    rec.measure =
                        std::pow(t_star, 0.5 * alpha) *
                        fem::fe_norms(cfg.space, sol.trajectory.eval(t_star))
                            .h1_semi;
                } else {
                    double mx = fem::fe_norms(cfg.space, sol.initial).l2;
                    for (int n = 0; n < sol.steps(); ++n) {
                        mx = std::max(
                            mx,
                            fem::fe_norms(cfg.space, sol.value_plus(n)).l2);
                        mx = std::max(
                            mx, fem::fe_norms(cfg.space, sol.value_minus(n + 1))
                                    .l2);
                    }
                    rec.measure = mx;
                }
                rec.functional = data_functional(cfg.space, sol.initial, dc.g,
                                                 cfg.partition.t, t_star);
                rec.ratio =
                    rec.functional > 0.0 ? rec.measure / rec.functional : 0.0;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            rep.records.push_back(std::move(rec));
        }
    return rep;
}

double square(double x) { return x * x; }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        num += dx * (std::log(y[i]) - my);
        den += dx * dx;
    }
    return num / den;
}

// local monomial coefficients on sigma in [0, 1] from a Legendre row
std::array<double, 3> monomial_coeffs(const std::vector<std::vector<double>>& block) {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    if (block.size() > 0) c0 = block[0][0];
    if (block.size() > 1) c1 = block[1][0];
    if (block.size() > 2) c2 = block[2][0];
    return {c0 - c1 + c2, 2.0 * c1 - 6.0 * c2, 6.0 * c2};
}

// exact int_0^t |g| for a scalar trajectory of degree <= 2, by splitting each
// interval at the sign changes of the local quadratic
double abs_integral(const PiecewiseTrajectory& g, double t) {
    const auto& bp = g.breakpoints();
    double acc = 0.0;
    for (std::size_t n = 0; n + 1 < bp.size() && bp[n] < t; ++n) {
        const double len = bp[n + 1] - bp[n];
        const double hi = std::min(1.0, (t - bp[n]) / len);
        const auto m = monomial_coeffs(g.coeff_block(n));
        std::vector<double> cuts{0.0};
        const double mag = std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]);
        if (std::abs(m[2]) > 1e-14 * mag) {
            const double disc = m[1] * m[1] - 4.0 * m[2] * m[0];
            if (disc > 0.0) {
                const double sq = std::sqrt(disc);
                const double r1 = (-m[1] - sq) / (2.0 * m[2]);
                const double r2 = (-m[1] + sq) / (2.0 * m[2]);
                for (double r : {std::min(r1, r2), std::max(r1, r2)})
                    if (r > 0.0 && r < hi) cuts.push_back(r);
            }
        } else if (std::abs(m[1]) > 1e-14 * mag) {
            const double r = -m[0] / m[1];
            if (r > 0.0 && r < hi) cuts.push_back(r);
        }
        cuts.push_back(hi);
        const auto anti = [&](double s) {
            return s * (m[0] + s * (0.5 * m[1] + s * m[2] / 3.0));
        };
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
            acc += len * std::abs(anti(cuts[c + 1]) - anti(cuts[c]));
    }
    return acc;
}

// int_0^t ||(I^mu phi)(s)||^2 ds by graded Gauss panels per interval
double integral_sq_norm(const PiecewiseTrajectory& phi, double mu, double t) {
    const auto panels = clipped_times(phi.breakpoints(), t);
    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < panels.size(); ++p)
        acc += ops::graded_panel_quad(
            [&](double s) {
                const auto v = ops::frac_integral_eval(phi, mu, s);
                double q = 0.0;
                for (double x : v) q += x * x;
                return q;
            },
            panels[p], panels[p + 1]);
    return acc;
}

PiecewiseTrajectory random_scalar_traj(Rng& rng) {
    const int n = 1 + static_cast<int>(rng.index(4));
    std::vector<double> bp{0.0};
    for (int i = 0; i < n; ++i) bp.push_back(bp.back() + rng.uniform(0.15, 0.7));
    std::vector<std::vector<double>> coeffs(n);
    for (int i = 0; i < n; ++i) {
        const int degree = static_cast<int>(rng.index(3));
        for (int a = 0; a <= degree; ++a)
            coeffs[i].push_back(rng.uniform(-1.0, 1.0));
    }
    return PiecewiseTrajectory::scalar(std::move(bp), std::move(coeffs));
}

}  // namespace

double psi(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("psi: order must lie in (0, 1]");
    if (alpha == 1.0) return 1.0;
    const double om = 1.0 - alpha;
    // pi^-(1-a) (2-a)^(2-a) (1-a)^-(1-a) / sin(pi a/2)
    const double log_num = (2.0 - alpha) * std::log(2.0 - alpha) -
                           om * std::log(kPi) - om * std::log(om);
    return std::exp(log_num) / std::sin(0.5 * kPi * alpha);
}

StabilityReport stability_sweep(const ts::SchemeConfig& base,
                                const std::vector<double>& alpha_grid,
                                const std::vector<DataCase>& cases) {
    return sweep_common(base, alpha_grid, cases, base.partition.T, false);
}

StabilityReport gradient_sweep(const ts::SchemeConfig& base,
                               const std::vector<double>& alpha_grid,
                               const std::vector<DataCase>& cases,
                               double t_star) {
    if (!(t_star > 0.0) || t_star > base.partition.T)
        throw std::invalid_argument(
            "gradient_sweep: evaluation time outside (0, T]");
    return sweep_common(base, alpha_grid, cases, t_star, true);
}

EnergyLedger energy_check(const ts::DiscreteSolution& solution,
                          const ts::SchemeConfig& cfg) {
    const int n_steps = cfg.partition.N;
    if (solution.steps() != n_steps ||
        static_cast<int>(solution.memory_increments.size()) != n_steps)
        throw std::invalid_argument(
            "energy_check: solution does not carry the DG memory increments "
            "for this partition");
    if (!(cfg.fields.kappa_min > 0.0))
        throw std::invalid_argument("energy_check: kappa_min must be positive");

    const auto& space = cfg.space;
    EnergyLedger ledger;
    ledger.initial_sq = square(fem::fe_norms(space, solution.initial).l2);
    const double c_omega =
        fem::poincare_constant(space.mesh.x_left(), space.mesh.x_right());
    const double factor = c_omega * psi(cfg.alpha) / cfg.fields.kappa_min;

    const auto& rule = linalg::gauss_rule(4);
    double int_g_sq = 0.0, jumps = 0.0, memory = 0.0;
    for (int n = 1; n <= n_steps; ++n) {
        const double t0 = cfg.partition.t[n - 1], t1 = cfg.partition.t[n];
        const double k = t1 - t0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double s = t0 + k * rule.nodes[q];
            const double gn = profile_l2(
                space, [&](double x) { return cfg.fields.g(x, s); });
            int_g_sq += k * rule.weights[q] * gn * gn;
        }
        jumps += square(fem::fe_norms(space, solution.jump(n - 1)).l2);
        memory += solution.memory_increments[n - 1];

        ledger.times.push_back(t1);
        ledger.end_sq.push_back(
            square(fem::fe_norms(space, solution.value_minus(n)).l2));
        ledger.jump_sq.push_back(jumps);
        ledger.memory.push_back(memory);
        ledger.rhs.push_back(ledger.initial_sq +
                             factor * int_g_sq /
                                 std::pow(t1, 1.0 - cfg.alpha));
        ledger.slack.push_back(ledger.rhs.back() -
                               (ledger.end_sq.back() + jumps + memory));
    }

    ledger.scale = ledger.initial_sq;
    for (int n = 0; n < n_steps; ++n)
        ledger.scale = std::max(
            {ledger.scale, ledger.rhs[n],
             ledger.end_sq[n] + ledger.jump_sq[n] + std::abs(ledger.memory[n])});
    ledger.worst_slack = ledger.slack.empty() ? 0.0 : ledger.slack[0];
    bool ok = true;
    for (int n = 0; n < n_steps; ++n) {
        ledger.worst_slack = std::min(ledger.worst_slack, ledger.slack[n]);
        if (ledger.slack[n] < -1e-8 * ledger.scale) ok = false;
        if (ledger.memory[n] < -1e-9 * ledger.scale) ok = false;
    }
    ledger.pass = ok;
    return ledger;
}

RateTable convergence_study(double alpha, const ts::ModalExpansion& modes,
                            const std::vector<int>& interior_node_counts,
                            const ts::TimePartition& fine_partition,
                            double t_star) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("convergence_study: alpha outside (0, 1]");
    if (interior_node_counts.empty())
        throw std::invalid_argument("convergence_study: no mesh levels");
    for (std::size_t i = 0; i + 1 < interior_node_counts.size(); ++i)
        if (interior_node_counts[i] >= interior_node_counts[i + 1])
            throw std::invalid_argument(
                "convergence_study: mesh levels must refine");
    if (!(t_star > 0.0) || t_star > fine_partition.T)
        throw std::invalid_argument(
            "convergence_study: evaluation time outside (0, T]");
    const double width = modes.x_right - modes.x_left;
    if (!(width > 0.0))
        throw std::invalid_argument("convergence_study: empty domain");

    const auto run = [&](const ts::TimePartition& part, RateTable& table) {
        for (int m : interior_node_counts) {
            ts::SchemeConfig cfg{
                alpha, part, 1,
                fem::FeSpace{
                    fem::Mesh1D::uniform(modes.x_left, modes.x_right, m)}};
            cfg.fields.kappa = [kap = modes.kappa](double) { return kap; };
            cfg.fields.kappa_min = modes.kappa;
            cfg.u0 = [&](double x) {
                return ts::modal_value(modes, alpha, x, 0.0);
            };
            cfg.u0_prime = [&](double x) {
                return ts::modal_deriv(modes, alpha, x, 0.0);
            };
            cfg.initial = ts::InitialData::RitzProjection;
            const auto sol = ts::dg_solve_diffusion(cfg);
            const auto err = fem::error_norms(
                cfg.space, sol.trajectory.eval(t_star),
                [&](double x) { return ts::modal_value(modes, alpha, x, t_star); },
                [&](double x) {
                    return ts::modal_deriv(modes, alpha, x, t_star);
                });
            table.h.push_back(width / (m + 1));
            table.err_l2.push_back(err.l2);
            table.err_h1.push_back(err.h1_semi);
        }
        if (table.h.size() >= 2) {
            table.slope_l2 = fit_slope(table.h, table.err_l2);
            table.slope_h1 = fit_slope(table.h, table.err_h1);
        }
    };

    RateTable table;
    run(fine_partition, table);
    if (table.h.size() >= 2 && fine_partition.N >= 2) {
        RateTable halved;
        run(ts::TimePartition::graded(fine_partition.T, fine_partition.N / 2,
                                      fine_partition.gamma),
            halved);
        if (std::abs(table.slope_l2 - halved.slope_l2) > 0.1 ||
            std::abs(table.slope_h1 - halved.slope_h1) > 0.1)
            table.temporal_contamination = true;
    }
    return table;
}

LemmaReport lemma_property_suite(std::uint64_t seed, int trials) {
    if (trials < 1)
        throw std::invalid_argument("lemma_property_suite: trials must be >= 1");
    Rng rng(seed);
    LemmaReport report;
    report.pass = true;

    // keep the trial with the worst slack relative to its own scale
    struct Worst {
        double slack = std::numeric_limits<double>::infinity();
        double scale = 1.0;
        void offer(double s, double sc) {
            if (s / sc < slack / scale) {
                slack = s;
                scale = sc;
            }
        }
    };
    const auto push = [&](const char* name, const Worst& w, double tol) {
        LemmaCheck check{name, trials, w.slack, w.scale,
                         w.slack >= -tol * w.scale};
        report.checks.push_back(check);
        report.pass = report.pass && check.pass;
    };

    {  // t (I^a phi) - I^a (s phi) = a I^(a+1) phi
        Worst w;
        for (int i = 0; i < trials; ++i) {
            const auto phi = random_scalar_traj(rng);
            const double alpha = rng.uniform(0.05, 1.0);
            const double t = phi.end_time() * rng.uniform(0.3, 1.0);
            const double ia = ops::frac_integral_eval(phi, alpha, t)[0];
            const double iam =
                ops::frac_integral_eval(phi.multiply_by_time(), alpha, t)[0];
            const double rhs = alpha * ops::frac_integral_eval(phi, alpha + 1.0, t)[0];
            const double scale =
                std::abs(t * ia) + std::abs(iam) + std::abs(rhs) + 1e-30;
            w.offer(-std::abs(t * ia - iam - rhs), scale);
        }
        push("time-multiplier commutator", w, 1e-10);
    }

    {  // int ||I^nu phi||^2 <= 2 t^(2(nu-mu)) int ||I^mu phi||^2
        Worst w;
        for (int i = 0; i < trials; ++i) {
            const auto phi = random_scalar_traj(rng);
            const double mu = rng.uniform(0.0, 0.9);
            const double nu = mu + (1.0 - mu) * rng.uniform(0.0, 1.0);
            const double t = phi.end_time();
            const double lhs = integral_sq_norm(phi, nu, t);
            const double rhs = 2.0 * std::pow(t, 2.0 * (nu - mu)) *
                               integral_sq_norm(phi, mu, t);
            w.offer(rhs - lhs, lhs + rhs + 1e-30);
        }
        push("order comparison", w, 1e-9);
    }

    {  // int ||I^mu phi||^2 <= 2 int w_mu(t-s) int_0^s <phi, I^mu phi>
        Worst w;
        for (int i = 0; i < trials; ++i) {
            const auto phi = random_scalar_traj(rng);
            const double mu = rng.uniform(0.05, 1.0);
            const double t = phi.end_time();
            const double lhs = integral_sq_norm(phi, mu, t);
            std::vector<double> interior(phi.breakpoints().begin() + 1,
                                         phi.breakpoints().end() - 1);
            const double rhs =
                2.0 * ops::omega_weighted_quad(
                          [&](double s) {
                              return ops::history_inner_integral(phi, mu, s);
                          },
                          mu, t, interior);
            w.offer(rhs - lhs, lhs + rhs + 1e-30);
        }
        push("outer convolution bound", w, 1e-9);
    }

    {  // ||phi(t)||^2 <= 2 w_(2-nu)(t) int <phi', I^nu phi'> for phi(0) = 0
        Worst w;
        for (int i = 0; i < trials; ++i) {
            const auto rate = random_scalar_traj(rng);
            const auto phi = rate.antiderivative();
            const double nu = rng.uniform(0.05, 1.0);
            const double t = rate.end_time();
            const double val = phi.eval(t)[0];
            const double rhs = 2.0 * ops::omega(2.0 - nu, t) *
                               ops::history_inner_integral(rate, nu, t);
            w.offer(rhs - val * val, val * val + std::abs(rhs) + 1e-30);
        }
        push("endpoint value bound", w, 1e-9);
    }

    {  // int_0^t <phi, I^mu phi> >= 0
        Worst w;
        for (int i = 0; i < trials; ++i) {
            const auto phi = random_scalar_traj(rng);
            const double mu = rng.uniform(0.02, 0.98);
            const double t = phi.end_time();
            const double val = ops::history_inner_integral(phi, mu, t);
            const double scale =
                square(phi.coeff_scale()) * square(1.0 + t) + 1e-30;
            w.offer(val, scale);
        }
        push("convolution positivity", w, 1e-9);
    }

    {  // (int |g|)^2 + t^-1 int (s g)^2 <= (1 + 1/eta) t^eta int s^(1-eta) g^2
        const auto& rule = linalg::gauss_rule(4);
        Worst w;
        for (int i = 0; i < trials; ++i) {
            const auto g = random_scalar_traj(rng);
            const double eta = rng.uniform(0.05, 1.0);
            const double t = g.end_time();
            const double a1 = abs_integral(g, t);
            double sg_sq = 0.0;  // exact: integrand is a polynomial per panel
            const auto& bp = g.breakpoints();
            for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
                const double len = bp[p + 1] - bp[p];
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    const double s = bp[p] + len * rule.nodes[q];
                    const double v = g.eval(s)[0];
                    sg_sq += len * rule.weights[q] * s * s * v * v;
                }
            }
            const double lhs = a1 * a1 + sg_sq / t;
            double weighted = 0.0;
            for (std::size_t p = 0; p + 1 < bp.size(); ++p)
                weighted += ops::graded_panel_quad(
                    [&](double s) {
                        const double v = g.eval(s)[0];
                        return std::pow(s, 1.0 - eta) * v * v;
                    },
                    bp[p], bp[p + 1]);
            const double rhs = (1.0 + 1.0 / eta) * std::pow(t, eta) * weighted;
            w.offer(rhs - lhs, lhs + rhs + 1e-30);
        }
        push("source-term alternative", w, 1e-9);
    }

    return report;
}

RatioProbe b_operator_ratio_probe(const std::function<double(double)>& profile,
                                  int levels, double alpha, double T,
                                  const std::function<double(double)>& F,
                                  const std::function<double(double)>& Fdot) {
    if (levels < 1)
        throw std::invalid_argument("b_operator_ratio_probe: need >= 1 level");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("b_operator_ratio_probe: alpha outside (0, 1]");
    if (!(T > 0.0))
        throw std::invalid_argument("b_operator_ratio_probe: horizon <= 0");

    RatioProbe probe;
    for (int level = 1; level <= levels; ++level) {
        const int n = 1 << level;
        std::vector<double> bp(n + 1);
        for (int i = 0; i <= n; ++i)
            bp[i] = T * static_cast<double>(i) / n;
        std::vector<std::vector<double>> coeffs(n);
        for (int i = 0; i < n; ++i) {
            const double v0 = profile(bp[i]), v1 = profile(bp[i + 1]);
            coeffs[i] = {0.5 * (v0 + v1), 0.5 * (v1 - v0)};
        }
        const auto traj = PiecewiseTrajectory::scalar(bp, std::move(coeffs));

        double num = 0.0;
        for (int i = 0; i < n; ++i)
            num += ops::graded_panel_quad(
                [&](double s) {
                    const double b = ops::operator_b1(traj, F, Fdot, alpha, s)[0];
                    return b * b;
                },
                bp[i], bp[i + 1]);
        const double den = integral_sq_norm(traj, alpha, T);
        probe.ratios.push_back(den > 0.0 ? num / den : 0.0);
    }
    probe.bounded = true;
    for (std::size_t i = 1; i + 1 < probe.ratios.size(); ++i)
        if (probe.ratios[i + 1] > 1.1 * probe.ratios[i]) probe.bounded = false;
    return probe;
}

}  // namespace fracfp::analysis
