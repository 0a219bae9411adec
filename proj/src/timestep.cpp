#include "fracfp/timestep.hpp"

#include "fracfp/fracops.hpp"
#include "fracfp/linalg.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracfp::timestep {

namespace {

namespace ops = fracops;

void validate_config(const SchemeConfig& cfg) {
    if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
        throw std::domain_error("timestep: alpha must lie in (0, 1]");
    if (cfg.degree != 0 && cfg.degree != 1)
        throw std::invalid_argument("timestep: local degree must be 0 or 1");
    const auto& t = cfg.partition.t;
    if (static_cast<int>(t.size()) != cfg.partition.N + 1 || t.front() != 0.0)
        throw std::invalid_argument("timestep: malformed time partition");
    for (std::size_t n = 0; n + 1 < t.size(); ++n)
        if (!(t[n] < t[n + 1]))
            throw std::invalid_argument("timestep: time levels must increase");
}

void require_zero_field(const SchemeConfig& cfg) {
    const auto& mesh = cfg.space.mesh;
    for (double fx : {0.21, 0.5, 0.83}) {
        const double x = mesh.x_left() + fx * (mesh.x_right() - mesh.x_left());
        for (double ft : {0.0, 0.47, 1.0})
            if (cfg.fields.F(x, ft * cfg.partition.T) != 0.0)
                throw std::invalid_argument(
                    "dg_solve_diffusion: convection field must vanish");
    }
}

// W[b][a]: memory coupling of the current step's Legendre trajectories,
// W[0][a] = (I^a e_a)(k) and W[1][a] = (I^a e_a)(k) - (2/k)(I^{a+1} e_a)(k),
// both closed-form
std::array<std::array<double, 2>, 2> local_weights(double alpha, double k,
                                                   int p) {
    std::array<std::array<double, 2>, 2> w{};
    for (int a = 0; a <= p; ++a) {
        std::vector<double> row(a + 1, 0.0);
        row[a] = 1.0;
        const auto e = PiecewiseTrajectory::scalar({0.0, k}, {row});
        const double ia = ops::frac_integral_eval(e, alpha, k)[0];
        w[0][a] = ia;
        if (p == 1)
            w[1][a] =
                ia - 2.0 / k * ops::frac_integral_eval(e, alpha + 1.0, k)[0];
    }
    return w;
}

double entry(const fem1d::BandedOperator& op, int i, int j) {
    if (i == j) return op.diag[i];
    if (j == i - 1) return op.sub[j];
    if (j == i + 1) return op.sup[i];
    return 0.0;
}

double band_scale(const fem1d::BandedOperator& op) {
    double s = 0.0;
    for (double v : op.diag) s = std::max(s, std::abs(v));
    for (double v : op.sub) s = std::max(s, std::abs(v));
    for (double v : op.sup) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace

TimePartition TimePartition::graded(double T, int N, double gamma) {
    if (!(T > 0.0))
        throw std::invalid_argument("TimePartition: horizon must be positive");
    if (N < 1)
        throw std::invalid_argument("TimePartition: need at least one step");
    if (!(gamma >= 1.0))
        throw std::invalid_argument(
            "TimePartition: grading exponent must be at least 1");
    TimePartition part;
    part.T = T;
    part.N = N;
    part.gamma = gamma;
    part.t.resize(N + 1);
    for (int n = 0; n <= N; ++n)
        part.t[n] = T * std::pow(static_cast<double>(n) / N, gamma);
    part.t[0] = 0.0;
    part.t[N] = T;
    return part;
}

std::vector<double> DiscreteSolution::value_minus(int n) const {
    if (n == 0) return initial;
    return trajectory.value_left(n);
}

std::vector<double> DiscreteSolution::value_plus(int n) const {
    return trajectory.value_right(n);
}

std::vector<double> DiscreteSolution::jump(int n) const {
    auto v = value_plus(n);
    const auto minus = value_minus(n);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= minus[i];
    return v;
}

std::vector<double> initial_coefficients(const SchemeConfig& cfg) {
    switch (cfg.initial) {
        case InitialData::L2Projection:
            return fem1d::l2_project(cfg.space, cfg.u0);
        case InitialData::RitzProjection:
            return fem1d::ritz_project(cfg.space, cfg.fields, cfg.u0,
                                       cfg.u0_prime);
        case InitialData::RawNodal: {
            std::vector<double> c(cfg.space.dof());
            for (int i = 0; i < cfg.space.dof(); ++i)
                c[i] = cfg.u0(cfg.space.mesh.nodes[i + 1]);
            return c;
        }
    }
    throw std::invalid_argument("initial_coefficients: unknown mode");
}

DiscreteSolution dg_solve_diffusion(const SchemeConfig& cfg) {
    validate_config(cfg);
    require_zero_field(cfg);
    const auto& part = cfg.partition;
    const int p = cfg.degree;
    const int m = cfg.space.dof();
    const auto mass = fem1d::assemble_mass(cfg.space);
    const auto stiff = fem1d::assemble_stiffness(cfg.space, cfg.fields);
    const auto& g4 = linalg::gauss_rule(4);
    // At alpha = 1 the memory reduces to the current interval: I^1 of the
    // zero-extended history is constant across I_n, so H vanishes identically
    // and the scheme is a one-step method.
    const bool memoryless = cfg.alpha == 1.0;

    // T1[b][a] = Q_b(0) Q_a(0) + int_0^1 Q_b Q_a'
    const double T1[2][2] = {{1.0, 1.0}, {-1.0, 1.0}};

    auto u_prev = initial_coefficients(cfg);
    const std::vector<double> u0x = u_prev;

    std::vector<std::vector<std::vector<double>>> blocks;
    blocks.reserve(part.N);
    std::vector<double> mem;
    mem.reserve(part.N);

    for (int n = 1; n <= part.N; ++n) {
        const double t0 = part.t[n - 1], t1 = part.t[n], k = t1 - t0;
        const auto w = local_weights(cfg.alpha, k, p);

        std::vector<std::vector<double>> H(p + 1, std::vector<double>(m, 0.0));
        if (n > 1 && !memoryless) {
            const PiecewiseTrajectory hist(
                std::vector<double>(part.t.begin(), part.t.begin() + n),
                blocks);
            const auto ia1 = ops::frac_integral_zero_extended(hist, cfg.alpha, t1);
            const auto ia0 = ops::frac_integral_zero_extended(hist, cfg.alpha, t0);
            for (int i = 0; i < m; ++i) H[0][i] = ia1[i] - ia0[i];
            if (p == 1) {
                const auto j1 =
                    ops::frac_integral_zero_extended(hist, cfg.alpha + 1.0, t1);
                const auto j0 =
                    ops::frac_integral_zero_extended(hist, cfg.alpha + 1.0, t0);
                for (int i = 0; i < m; ++i)
                    H[1][i] = ia1[i] + ia0[i] - 2.0 / k * (j1[i] - j0[i]);
            }
        }

        // G_b = int_{I_n} Q_b(tau(t)) <g(t), basis> dt
        std::vector<std::vector<double>> G(p + 1, std::vector<double>(m, 0.0));
        for (std::size_t q = 0; q < g4.nodes.size(); ++q) {
            const double tau = g4.nodes[q];
            const double tq = t0 + k * tau;
            const auto load = fem1d::load_vector(
                cfg.space, [&](double x) { return cfg.fields.g(x, tq); });
            for (int b = 0; b <= p; ++b) {
                const double s =
                    g4.weights[q] * k * PiecewiseTrajectory::basis(b, tau);
                for (int i = 0; i < m; ++i) G[b][i] += s * load[i];
            }
        }

        const auto mu_prev = mass.apply(u_prev);
        std::vector<std::vector<double>> rhs(p + 1);
        for (int b = 0; b <= p; ++b) {
            const double qb0 = PiecewiseTrajectory::basis(b, 0.0);
            const auto ah = stiff.apply(H[b]);
            rhs[b].resize(m);
            for (int i = 0; i < m; ++i)
                rhs[b][i] = qb0 * mu_prev[i] + G[b][i] - ah[i];
        }

        std::vector<std::vector<double>> u_new(p + 1);
        if (p == 0) {
            std::vector<double> diag(m), off(m > 0 ? m - 1 : 0);
            for (int i = 0; i < m; ++i)
                diag[i] = mass.diag[i] + w[0][0] * stiff.diag[i];
            for (int i = 0; i + 1 < m; ++i)
                off[i] = mass.sup[i] + w[0][0] * stiff.sup[i];
            try {
                u_new[0] = linalg::TridiagonalCholesky(diag, off).solve(rhs[0]);
            } catch (const std::domain_error& e) {
                throw std::runtime_error(
                    "dg_solve_diffusion: step " + std::to_string(n) +
                    " system lost positive definiteness: " + e.what());
            }
        } else {
            // interleaved unknowns (i, a) -> 2i + a keep the bandwidth at 3
            linalg::BandedMatrix sys(2 * m, 3, 3);
            for (int i = 0; i < m; ++i)
                for (int j = std::max(0, i - 1); j <= std::min(m - 1, i + 1); ++j) {
                    const double mij = entry(mass, i, j);
                    const double aij = entry(stiff, i, j);
                    for (int b = 0; b <= 1; ++b)
                        for (int a = 0; a <= 1; ++a)
                            sys.at(2 * i + b, 2 * j + a) =
                                T1[b][a] * mij + w[b][a] * aij;
                }
            std::vector<double> flat(2 * m);
            for (int i = 0; i < m; ++i)
                for (int b = 0; b <= 1; ++b) flat[2 * i + b] = rhs[b][i];
            std::vector<double> sol;
            try {
                sys.factor();
                sol = sys.solve(flat);
            } catch (const std::runtime_error& e) {
                throw std::runtime_error("dg_solve_diffusion: step " +
                                         std::to_string(n) +
                                         " system singular: " + e.what());
            }
            u_new[0].resize(m);
            u_new[1].resize(m);
            for (int i = 0; i < m; ++i) {
                u_new[0][i] = sol[2 * i];
                u_new[1][i] = sol[2 * i + 1];
            }
        }

        // memory term of the energy identity on I_n, from the step's own
        // quantities: sum_b <U^b, A (sum_a W_ba U^a + H_b)>
        double mem_n = 0.0;
        for (int b = 0; b <= p; ++b) {
            std::vector<double> arg = H[b];
            for (int a = 0; a <= p; ++a)
                for (int i = 0; i < m; ++i) arg[i] += w[b][a] * u_new[a][i];
            mem_n += stiff.inner(u_new[b], arg);
        }
        mem.push_back(mem_n);

        u_prev = u_new[0];
        if (p == 1)
            for (int i = 0; i < m; ++i) u_prev[i] += u_new[1][i];
        blocks.push_back(std::move(u_new));
    }

    return DiscreteSolution{PiecewiseTrajectory(part.t, std::move(blocks)),
                            std::move(u0x), std::move(mem)};
}

DiscreteSolution solve_general_F(const SchemeConfig& cfg) {
    validate_config(cfg);
    const auto& part = cfg.partition;
    const int m = cfg.space.dof();
    const auto mass = fem1d::assemble_mass(cfg.space);
    const auto stiff = fem1d::assemble_stiffness(cfg.space, cfg.fields);
    const auto& g4 = linalg::gauss_rule(4);
    const double inv_gamma_a1 = 1.0 / std::tgamma(cfg.alpha + 1.0);

    const auto u0x = initial_coefficients(cfg);
    const auto mu0 = mass.apply(u0x);

    std::vector<std::vector<std::vector<double>>> blocks;
    blocks.reserve(part.N);
    std::vector<double> gcum(m, 0.0);  // int_0^{t_n} <g, basis>
    std::vector<double> bsum(m, 0.0);  // sum_{m<n} C(mid_m) J_m

    for (int n = 1; n <= part.N; ++n) {
        const double t0 = part.t[n - 1], t1 = part.t[n], k = t1 - t0;
        const double w_self = std::pow(k, cfg.alpha) * inv_gamma_a1;
        const auto conv =
            fem1d::assemble_convection(cfg.space, cfg.fields, 0.5 * (t0 + t1));

        for (std::size_t q = 0; q < g4.nodes.size(); ++q) {
            const double tq = t0 + k * g4.nodes[q];
            const auto load = fem1d::load_vector(
                cfg.space, [&](double x) { return cfg.fields.g(x, tq); });
            for (int i = 0; i < m; ++i)
                gcum[i] += g4.weights[q] * k * load[i];
        }

        std::vector<double> ia1(m, 0.0), ia0(m, 0.0);
        if (n > 1) {
            const PiecewiseTrajectory hist(
                std::vector<double>(part.t.begin(), part.t.begin() + n),
                blocks);
            ia1 = ops::frac_integral_zero_extended(hist, cfg.alpha, t1);
            ia0 = ops::frac_integral_zero_extended(hist, cfg.alpha, t0);
        }

        // collocated equation: M U^n + A (I^a U)(t_n) - sum_m C_m J_m = f
        const auto a_ia = stiff.apply(ia1);
        std::vector<double> jhist(m);
        for (int i = 0; i < m; ++i) jhist[i] = ia1[i] - ia0[i];
        const auto c_jhist = conv.apply(jhist);
        std::vector<double> rhs(m);
        for (int i = 0; i < m; ++i)
            rhs[i] = mu0[i] + gcum[i] - a_ia[i] + bsum[i] + c_jhist[i];

        linalg::BandedMatrix sys(m, 1, 1);
        for (int i = 0; i < m; ++i) {
            sys.at(i, i) =
                mass.diag[i] + w_self * (stiff.diag[i] - conv.diag[i]);
            if (i > 0)
                sys.at(i, i - 1) =
                    mass.sub[i - 1] + w_self * (stiff.sub[i - 1] - conv.sub[i - 1]);
            if (i + 1 < m)
                sys.at(i, i + 1) =
                    mass.sup[i] + w_self * (stiff.sup[i] - conv.sup[i]);
        }
        std::vector<double> u_new;
        try {
            sys.factor();
            u_new = sys.solve(rhs);
        } catch (const std::runtime_error&) {
            throw std::runtime_error(
                "solve_general_F: singular system at step " + std::to_string(n) +
                " (diffusive scale " +
                std::to_string(band_scale(mass) + w_self * band_scale(stiff)) +
                ", drift scale " + std::to_string(w_self * band_scale(conv)) +
                ")");
        }

        // fold this step's drift memory into the running sum:
        // J_n = (I^a U)(t_n) - (I^a U)(t_{n-1}) = jhist + w_self U^n
        std::vector<double> jn = jhist;
        for (int i = 0; i < m; ++i) jn[i] += w_self * u_new[i];
        const auto c_jn = conv.apply(jn);
        for (int i = 0; i < m; ++i) bsum[i] += c_jn[i];

        blocks.push_back({std::move(u_new)});
    }

    return DiscreteSolution{PiecewiseTrajectory(part.t, std::move(blocks)),
                            std::move(u0x),
                            {}};
}

double modal_value(const ModalExpansion& modes, double alpha, double x,
                   double t) {
    const double L = modes.x_right - modes.x_left;
    if (!(L > 0.0)) throw std::invalid_argument("modal_value: empty domain");
    constexpr double pi = std::numbers::pi;
    double acc = 0.0;
    for (std::size_t j = 0; j < modes.amplitudes.size(); ++j) {
        const double freq = (j + 1) * pi / L;
        const double amp = ops::mittag_leffler(
            alpha, -modes.kappa * freq * freq * std::pow(t, alpha));
        acc += modes.amplitudes[j] * amp * std::sin(freq * (x - modes.x_left));
    }
    return acc;
}

double modal_deriv(const ModalExpansion& modes, double alpha, double x,
                   double t) {
    const double L = modes.x_right - modes.x_left;
    if (!(L > 0.0)) throw std::invalid_argument("modal_deriv: empty domain");
    constexpr double pi = std::numbers::pi;
    double acc = 0.0;
    for (std::size_t j = 0; j < modes.amplitudes.size(); ++j) {
        const double freq = (j + 1) * pi / L;
        const double amp = ops::mittag_leffler(
            alpha, -modes.kappa * freq * freq * std::pow(t, alpha));
        acc += modes.amplitudes[j] * amp * freq *
               std::cos(freq * (x - modes.x_left));
    }
    return acc;
}

std::vector<double> modal_reference(const fem1d::FeSpace& space,
                                    const ModalExpansion& modes, double alpha,
                                    double t) {
    std::vector<double> vals(space.dof());
    for (int i = 0; i < space.dof(); ++i)
        vals[i] = modal_value(modes, alpha, space.mesh.nodes[i + 1], t);
    return vals;
}

JumpAccount jump_and_boundary_accounting(const DiscreteSolution& solution,
                                         const fem1d::FeSpace& space) {
    JumpAccount account;
    const int n = solution.steps();
    account.jump_norms.reserve(n);
    account.end_norms.reserve(n + 1);
    account.end_norms.push_back(fem1d::fe_norms(space, solution.initial).l2);
    for (int j = 0; j < n; ++j) {
        account.jump_norms.push_back(
            fem1d::fe_norms(space, solution.jump(j)).l2);
        account.end_norms.push_back(
            fem1d::fe_norms(space, solution.value_minus(j + 1)).l2);
    }
    return account;
}

}  // namespace fracfp::timestep
