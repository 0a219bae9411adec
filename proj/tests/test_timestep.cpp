#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracfp/fracops.hpp"
#include "fracfp/linalg.hpp"
#include "fracfp/timestep.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fem = fracfp::fem1d;
namespace ts = fracfp::timestep;
namespace ops = fracfp::fracops;

namespace {

constexpr double kPi = std::numbers::pi;

double sin_pi(double x) { return std::sin(kPi * x); }

fem::FeSpace unit_space(int interior) {
    return fem::FeSpace{fem::Mesh1D::uniform(0.0, 1.0, interior)};
}

ts::SchemeConfig diffusion_config(int interior, int steps, double T,
                                  double alpha, double gamma, int degree) {
    ts::SchemeConfig cfg{alpha, ts::TimePartition::graded(T, steps, gamma),
                         degree, unit_space(interior)};
    cfg.u0 = sin_pi;
    return cfg;
}

double max_nodal_diff(const std::vector<double>& a,
                      const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// dense LU with partial pivoting, for small oracle systems only
std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        REQUIRE(A[c][c] != 0.0);
        for (int r = c + 1; r < n; ++r) {
            const double f = A[r][c] / A[c][c];
            for (int cc = c; cc < n; ++cc) A[r][cc] -= f * A[c][cc];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

}  // namespace

TEST_CASE("time partition grading and validation") {
    const auto part = ts::TimePartition::graded(2.0, 4, 2.0);
    REQUIRE(part.t.size() == 5);
    CHECK(part.t[0] == 0.0);
    CHECK(part.t[1] == doctest::Approx(2.0 / 16.0).epsilon(1e-15));
    CHECK(part.t[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(part.t[3] == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(part.t[4] == 2.0);
    CHECK(part.step(1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(part.step(4) == doctest::Approx(0.875).epsilon(1e-15));

    const auto uni = ts::TimePartition::uniform_steps(1.0, 5);
    for (int n = 1; n <= 5; ++n)
        CHECK(uni.step(n) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(uni.t.back() == 1.0);

    CHECK_THROWS_AS(ts::TimePartition::graded(0.0, 4, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ts::TimePartition::graded(-1.0, 4, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ts::TimePartition::graded(1.0, 0, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(ts::TimePartition::graded(1.0, 4, 0.5),
                    std::invalid_argument);
}

TEST_CASE("initial coefficient modes") {
    const auto space = unit_space(15);
    ts::SchemeConfig cfg{1.0, ts::TimePartition::uniform_steps(1.0, 1), 0,
                         space};
    cfg.u0 = sin_pi;
    cfg.u0_prime = [](double x) { return kPi * std::cos(kPi * x); };

    cfg.initial = ts::InitialData::RawNodal;
    const auto raw = ts::initial_coefficients(cfg);
    for (int i = 0; i < space.dof(); ++i)
        CHECK(raw[i] == sin_pi(space.mesh.nodes[i + 1]));

    cfg.initial = ts::InitialData::L2Projection;
    const auto l2 = ts::initial_coefficients(cfg);
    cfg.initial = ts::InitialData::RitzProjection;
    const auto ritz = ts::initial_coefficients(cfg);
    // all three agree with the smooth profile to the interpolation error
    for (int i = 0; i < space.dof(); ++i) {
        CHECK(l2[i] == doctest::Approx(raw[i]).epsilon(1e-2));
        CHECK(ritz[i] == doctest::Approx(raw[i]).epsilon(1e-2));
    }
}

TEST_CASE("degree zero stepping at alpha one is backward Euler") {
    const int mdof = 15, nsteps = 16;
    const double T = 0.5;
    auto cfg = diffusion_config(mdof, nsteps, T, 1.0, 1.0, 0);
    cfg.fields.g = [](double x, double t) { return t * sin_pi(x); };
    const auto sol = ts::dg_solve_diffusion(cfg);

    // independent stepping: (M + kA) u^n = M u^{n-1} + (t_n^2 - t_{n-1}^2)/2 L
    const auto mass = fem::assemble_mass(cfg.space);
    const auto stiff = fem::assemble_stiffness(cfg.space, cfg.fields);
    const auto lsin = fem::load_vector(cfg.space, sin_pi);
    auto u = fem::l2_project(cfg.space, sin_pi);
    CHECK(max_nodal_diff(u, sol.value_minus(0)) == 0.0);

    const int m = cfg.space.dof();
    for (int n = 1; n <= nsteps; ++n) {
        const double k = cfg.partition.step(n);
        const double t0 = cfg.partition.t[n - 1], t1 = cfg.partition.t[n];
        std::vector<double> diag(m), off(m - 1);
        for (int i = 0; i < m; ++i) diag[i] = mass.diag[i] + k * stiff.diag[i];
        for (int i = 0; i + 1 < m; ++i) off[i] = mass.sup[i] + k * stiff.sup[i];
        auto rhs = mass.apply(u);
        const double gw = 0.5 * (t1 * t1 - t0 * t0);
        for (int i = 0; i < m; ++i) rhs[i] += gw * lsin[i];
        u = fracfp::linalg::TridiagonalCholesky(diag, off).solve(rhs);
        CHECK(max_nodal_diff(u, sol.value_minus(n)) <= 1e-12);
    }
}

TEST_CASE("degree one stepping at alpha one matches a dense block oracle") {
    const int mdof = 7, nsteps = 8;
    const double T = 0.4;
    auto cfg = diffusion_config(mdof, nsteps, T, 1.0, 1.0, 1);
    cfg.fields.g = [](double x, double t) { return t * sin_pi(x); };
    const auto sol = ts::dg_solve_diffusion(cfg);

    const auto mass = fem::assemble_mass(cfg.space);
    const auto stiff = fem::assemble_stiffness(cfg.space, cfg.fields);
    const auto lsin = fem::load_vector(cfg.space, sin_pi);
    const int m = cfg.space.dof();

    const auto dense_entry = [&](const fem::BandedOperator& op, int i, int j) {
        if (i == j) return op.diag[i];
        if (j == i - 1) return op.sub[j];
        if (j == i + 1) return op.sup[i];
        return 0.0;
    };

    auto u = fem::l2_project(cfg.space, sin_pi);
    for (int n = 1; n <= nsteps; ++n) {
        const double k = cfg.partition.step(n);
        const double t0 = cfg.partition.t[n - 1];
        // block system in (U0, U1): [[M+kA, M], [-M, M+kA/3]]
        std::vector<std::vector<double>> A(2 * m,
                                           std::vector<double>(2 * m, 0.0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double mij = dense_entry(mass, i, j);
                const double aij = dense_entry(stiff, i, j);
                A[i][j] = mij + k * aij;
                A[i][m + j] = mij;
                A[m + i][j] = -mij;
                A[m + i][m + j] = mij + k / 3.0 * aij;
            }
        const auto mu = mass.apply(u);
        std::vector<double> rhs(2 * m);
        const double g0 = k * (t0 + 0.5 * k);  // int Q0 g over the step
        const double g1 = k * k / 6.0;         // int Q1 g over the step
        for (int i = 0; i < m; ++i) {
            rhs[i] = mu[i] + g0 * lsin[i];
            rhs[m + i] = -mu[i] + g1 * lsin[i];
        }
        const auto x = dense_solve(A, rhs);
        std::vector<double> left(m), right(m);
        for (int i = 0; i < m; ++i) {
            right[i] = x[i] - x[m + i];  // value at t_{n-1}^+
            left[i] = x[i] + x[m + i];   // value at t_n^-
            u[i] = left[i];
        }
        CHECK(max_nodal_diff(right, sol.value_plus(n - 1)) <= 1e-10);
        CHECK(max_nodal_diff(left, sol.value_minus(n)) <= 1e-10);
    }
}

TEST_CASE("source-free end norms never exceed the initial norm") {
    for (double alpha : {0.4, 0.7, 1.0})
        for (int degree : {0, 1}) {
            CAPTURE(alpha);
            CAPTURE(degree);
            const auto cfg = diffusion_config(15, 12, 1.0, alpha, 2.0, degree);
            const auto sol = ts::dg_solve_diffusion(cfg);
            const auto account =
                ts::jump_and_boundary_accounting(sol, cfg.space);
            REQUIRE(account.end_norms.size() == 13);
            REQUIRE(account.jump_norms.size() == 12);
            const double bound = account.end_norms[0] * (1.0 + 1e-8);
            for (double v : account.end_norms) CHECK(v <= bound);
        }
}

TEST_CASE("zero data propagates exactly to zero") {
    for (int degree : {0, 1}) {
        auto cfg = diffusion_config(9, 6, 1.0, 0.6, 2.0, degree);
        cfg.u0 = [](double) { return 0.0; };
        const auto sol = ts::dg_solve_diffusion(cfg);
        for (int n = 0; n <= 6; ++n)
            for (double v : sol.value_minus(n)) CHECK(v == 0.0);
        for (double v : sol.memory_increments) CHECK(v == 0.0);
    }
    auto cfg = diffusion_config(9, 6, 1.0, 0.6, 2.0, 0);
    cfg.u0 = [](double) { return 0.0; };
    cfg.fields.F = [](double, double) { return 1.0; };
    cfg.fields.F_bound = 1.0;
    const auto sol = ts::solve_general_F(cfg);
    for (int n = 0; n <= 6; ++n)
        for (double v : sol.value_minus(n)) CHECK(v == 0.0);
}

TEST_CASE("stepping is linear in the data") {
    auto base = diffusion_config(11, 8, 1.0, 0.5, 2.0, 1);

    auto cfg_a = base;
    cfg_a.u0 = sin_pi;
    cfg_a.fields.g = [](double x, double t) { return t * sin_pi(x); };
    auto cfg_b = base;
    cfg_b.u0 = [](double x) { return x * (1.0 - x); };
    cfg_b.fields.g = [](double x, double) { return std::sin(2.0 * kPi * x); };
    auto cfg_ab = base;
    cfg_ab.u0 = [](double x) { return sin_pi(x) + x * (1.0 - x); };
    cfg_ab.fields.g = [](double x, double t) {
        return t * sin_pi(x) + std::sin(2.0 * kPi * x);
    };

    const auto sa = ts::dg_solve_diffusion(cfg_a);
    const auto sb = ts::dg_solve_diffusion(cfg_b);
    const auto sab = ts::dg_solve_diffusion(cfg_ab);
    for (int n = 0; n <= 8; ++n) {
        const auto va = sa.value_minus(n);
        const auto vb = sb.value_minus(n);
        auto sum = va;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += vb[i];
        CHECK(max_nodal_diff(sum, sab.value_minus(n)) <= 1e-11);
    }
}

TEST_CASE("modal expansion evaluation") {
    ts::ModalExpansion one;
    one.amplitudes = {1.0};

    SUBCASE("initial profile is reproduced exactly") {
        for (double x : {0.1, 0.37, 0.5, 0.92})
            CHECK(ts::modal_value(one, 0.5, x, 0.0) ==
                  doctest::Approx(sin_pi(x)).epsilon(1e-15));
    }

    SUBCASE("alpha one reduces to exponential decay") {
        for (double t : {0.05, 0.3, 1.0})
            for (double x : {0.25, 0.6})
                CHECK(ts::modal_value(one, 1.0, x, t) ==
                      doctest::Approx(std::exp(-kPi * kPi * t) * sin_pi(x))
                          .epsilon(1e-14));
    }

    SUBCASE("half-order decay factor at t = 1") {
        // first-mode amplitude E_{1/2}(-pi^2); absolute tolerance set by the
        // asymptotic evaluation branch
        CHECK(std::abs(ts::modal_value(one, 0.5, 0.5, 1.0) -
                       0.05687533871907823388079) <= 1e-9);
    }

    SUBCASE("modes superpose") {
        ts::ModalExpansion multi;
        multi.kappa = 0.7;
        multi.amplitudes = {0.3, 0.0, 1.25};
        const double alpha = 0.6, t = 0.4, x = 0.31;
        const double e1 =
            ops::mittag_leffler(alpha, -0.7 * kPi * kPi * std::pow(t, alpha));
        const double e3 = ops::mittag_leffler(
            alpha, -0.7 * 9.0 * kPi * kPi * std::pow(t, alpha));
        const double expected = 0.3 * e1 * std::sin(kPi * x) +
                                1.25 * e3 * std::sin(3.0 * kPi * x);
        CHECK(ts::modal_value(multi, alpha, x, t) ==
              doctest::Approx(expected).epsilon(1e-13));
    }

    SUBCASE("spatial derivative matches central differences") {
        ts::ModalExpansion multi;
        multi.x_left = -0.5;
        multi.x_right = 1.5;
        multi.amplitudes = {0.8, -0.4, 0.1};
        const double h = 1e-6;
        for (double x : {-0.2, 0.3, 1.1}) {
            const double fd = (ts::modal_value(multi, 0.7, x + h, 0.3) -
                               ts::modal_value(multi, 0.7, x - h, 0.3)) /
                              (2.0 * h);
            CHECK(ts::modal_deriv(multi, 0.7, x, 0.3) ==
                  doctest::Approx(fd).epsilon(1e-7));
        }
    }

    SUBCASE("nodal sampling") {
        const auto space = unit_space(7);
        const auto vals = ts::modal_reference(space, one, 0.5, 0.25);
        for (int i = 0; i < space.dof(); ++i)
            CHECK(vals[i] == doctest::Approx(ts::modal_value(
                                 one, 0.5, space.mesh.nodes[i + 1], 0.25))
                                 .epsilon(1e-15));
    }

    SUBCASE("degenerate domain is rejected") {
        ts::ModalExpansion bad;
        bad.x_left = 1.0;
        bad.x_right = 1.0;
        bad.amplitudes = {1.0};
        CHECK_THROWS_AS(ts::modal_value(bad, 0.5, 1.0, 0.1),
                        std::invalid_argument);
        CHECK_THROWS_AS(ts::modal_deriv(bad, 0.5, 1.0, 0.1),
                        std::invalid_argument);
    }
}

TEST_CASE("discrete solution approaches the modal solution under refinement") {
    ts::ModalExpansion one;
    one.amplitudes = {1.0};
    const double alpha = 0.5, T = 0.5;
    std::vector<double> errs;
    for (int level = 0; level < 3; ++level) {
        const int mdof = 15 * (1 << level) + ((1 << level) - 1);
        const int nsteps = 16 << level;
        const auto cfg = diffusion_config(mdof, nsteps, T, alpha, 4.0, 1);
        const auto sol = ts::dg_solve_diffusion(cfg);
        const auto err = fem::error_norms(
            cfg.space, sol.value_minus(nsteps),
            [&](double x) { return ts::modal_value(one, alpha, x, T); },
            [&](double x) { return ts::modal_deriv(one, alpha, x, T); });
        errs.push_back(err.l2);
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(errs[2] <= 5e-3);
}

TEST_CASE("accumulated memory increments match the closed-form functional") {
    for (int degree : {0, 1}) {
        CAPTURE(degree);
        auto cfg = diffusion_config(9, 8, 1.0, 0.6, 2.0, degree);
        cfg.u0 = [](double x) { return sin_pi(x) + 0.4 * x * (1.0 - x); };
        cfg.fields.g = [](double x, double t) { return t * sin_pi(x); };
        const auto sol = ts::dg_solve_diffusion(cfg);
        REQUIRE(sol.memory_increments.size() == 8);

        const auto stiff = fem::assemble_stiffness(cfg.space, cfg.fields);
        const ops::InnerProduct aip = [&](const std::vector<double>& x,
                                          const std::vector<double>& y) {
            return stiff.inner(x, y);
        };
        const auto oracle =
            ops::rl_energy_increments(sol.trajectory, cfg.alpha, aip);
        REQUIRE(oracle.size() == 8);
        double scale = 0.0;
        for (double v : oracle) scale += std::abs(v);
        for (int n = 0; n < 8; ++n)
            CHECK(std::abs(sol.memory_increments[n] - oracle[n]) <=
                  1e-9 * scale);

        // partial sums realize a nonnegative quadratic functional
        double run = 0.0;
        for (double v : sol.memory_increments) {
            run += v;
            CHECK(run >= -1e-9 * scale);
        }
    }
}

TEST_CASE("general scheme collapses to degree zero stepping without drift") {
    auto cfg = diffusion_config(15, 12, 1.0, 0.6, 2.0, 0);
    cfg.fields.g = [](double x, double t) { return t * sin_pi(x); };
    const auto dg = ts::dg_solve_diffusion(cfg);
    const auto gen = ts::solve_general_F(cfg);
    for (int n = 0; n <= 12; ++n)
        CHECK(max_nodal_diff(dg.value_minus(n), gen.value_minus(n)) <= 1e-8);
}

TEST_CASE("general scheme is first order in time") {
    auto make = [&](int nsteps) {
        auto cfg = diffusion_config(15, nsteps, 0.5, 1.0, 1.0, 0);
        cfg.fields.F = [](double, double) { return 1.0; };
        cfg.fields.F_bound = 1.0;
        return ts::solve_general_F(cfg);
    };
    const auto space = unit_space(15);
    // successive end-value differences scale like the step itself
    std::vector<double> diffs;
    for (int nsteps : {8, 16, 32}) {
        const auto coarse = make(nsteps).value_minus(nsteps);
        auto fine = make(2 * nsteps).value_minus(2 * nsteps);
        for (std::size_t i = 0; i < fine.size(); ++i) fine[i] -= coarse[i];
        diffs.push_back(fem::fe_norms(space, fine).l2);
    }
    const double r1 = std::log2(diffs[0] / diffs[1]);
    const double r2 = std::log2(diffs[1] / diffs[2]);
    CHECK(r1 > 0.7);
    CHECK(r1 < 1.3);
    CHECK(r2 > 0.7);
    CHECK(r2 < 1.3);
}

TEST_CASE("general scheme stays bounded with constant drift") {
    for (double alpha : {0.3, 0.7, 1.0}) {
        CAPTURE(alpha);
        auto cfg = diffusion_config(15, 16, 1.0, alpha, 2.0, 0);
        cfg.fields.F = [](double, double) { return 1.0; };
        cfg.fields.F_bound = 1.0;
        const auto sol = ts::solve_general_F(cfg);
        const double init = fem::fe_norms(cfg.space, sol.initial).l2;
        for (int n = 0; n <= 16; ++n)
            CHECK(fem::fe_norms(cfg.space, sol.value_minus(n)).l2 <=
                  2.0 * init);
    }
}

TEST_CASE("jump accounting bookkeeping") {
    SUBCASE("piecewise-constant jumps are end-value differences") {
        const auto cfg = diffusion_config(9, 6, 1.0, 0.7, 2.0, 0);
        const auto sol = ts::dg_solve_diffusion(cfg);
        const auto account = ts::jump_and_boundary_accounting(sol, cfg.space);
        for (int n = 0; n < 6; ++n) {
            auto d = sol.value_minus(n + 1);
            const auto prev = sol.value_minus(n);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= prev[i];
            CHECK(account.jump_norms[n] ==
                  doctest::Approx(fem::fe_norms(cfg.space, d).l2)
                      .epsilon(1e-13));
        }
    }

    SUBCASE("single step produces a single jump record") {
        const auto cfg = diffusion_config(9, 1, 0.5, 0.5, 1.0, 1);
        const auto account = ts::jump_and_boundary_accounting(
            ts::dg_solve_diffusion(cfg), cfg.space);
        CHECK(account.jump_norms.size() == 1);
        CHECK(account.end_norms.size() == 2);
    }

    SUBCASE("initial jump shrinks under time refinement") {
        auto max_jump = [&](int nsteps) {
            const auto cfg = diffusion_config(15, nsteps, 0.5, 1.0, 1.0, 1);
            const auto account = ts::jump_and_boundary_accounting(
                ts::dg_solve_diffusion(cfg), cfg.space);
            double m = 0.0;
            for (double v : account.jump_norms) m = std::max(m, v);
            return m;
        };
        CHECK(max_jump(32) < max_jump(8));
    }
}

TEST_CASE("narrowest admissible space runs end to end") {
    auto cfg = diffusion_config(1, 2, 0.3, 0.5, 1.0, 1);
    const auto sol = ts::dg_solve_diffusion(cfg);
    REQUIRE(sol.value_minus(2).size() == 1);
    CHECK(std::isfinite(sol.value_minus(2)[0]));
}

TEST_CASE("configuration validation") {
    const auto good = diffusion_config(9, 4, 1.0, 0.5, 2.0, 0);

    auto bad_alpha = good;
    bad_alpha.alpha = 0.0;
    CHECK_THROWS_AS(ts::dg_solve_diffusion(bad_alpha), std::domain_error);
    bad_alpha.alpha = 1.5;
    CHECK_THROWS_AS(ts::dg_solve_diffusion(bad_alpha), std::domain_error);
    bad_alpha.alpha = -0.3;
    CHECK_THROWS_AS(ts::solve_general_F(bad_alpha), std::domain_error);

    auto bad_degree = good;
    bad_degree.degree = 2;
    CHECK_THROWS_AS(ts::dg_solve_diffusion(bad_degree), std::invalid_argument);

    auto drifting = good;
    drifting.fields.F = [](double, double t) { return t; };
    CHECK_THROWS_AS(ts::dg_solve_diffusion(drifting), std::invalid_argument);

    auto bad_part = good;
    bad_part.partition.t.pop_back();
    CHECK_THROWS_AS(ts::dg_solve_diffusion(bad_part), std::invalid_argument);
    bad_part = good;
    bad_part.partition.t[1] = bad_part.partition.t[2];
    CHECK_THROWS_AS(ts::dg_solve_diffusion(bad_part), std::invalid_argument);
    bad_part = good;
    bad_part.partition.t[0] = 0.01;
    CHECK_THROWS_AS(ts::solve_general_F(bad_part), std::invalid_argument);
}
