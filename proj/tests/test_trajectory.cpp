#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fracfp/trajectory.hpp"

#include <stdexcept>
#include <vector>

using fracfp::PiecewiseTrajectory;

namespace {

// two intervals, quadratic then linear, jump 0.75 at the interior breakpoint
PiecewiseTrajectory jumpy() {
    return PiecewiseTrajectory::scalar({0.0, 0.4, 1.1},
                                       {{0.3, -1.1, 0.25}, {0.8, 0.6}});
}

// same quadratic start, matched at the breakpoint (value -0.55 on both sides)
PiecewiseTrajectory smooth() {
    return PiecewiseTrajectory::scalar({0.0, 0.4, 1.1},
                                       {{0.3, -1.1, 0.25}, {0.05, 0.6}});
}

}  // namespace

TEST_CASE("construction rejects malformed input") {
    CHECK_THROWS_AS(PiecewiseTrajectory::scalar({0.1, 1.0}, {{1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseTrajectory::scalar({0.0, 0.5, 0.5}, {{1.0}, {2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseTrajectory::scalar({0.0, 1.0}, {{1.0}, {2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        PiecewiseTrajectory::scalar({0.0, 1.0}, {{1.0, 0.0, 0.0, 0.0, 1.0}}),
        std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseTrajectory({0.0, 1.0}, {{{1.0}, {2.0, 3.0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseTrajectory({0.0, 1.0}, {{}}), std::invalid_argument);
}

TEST_CASE("evaluation takes one-sided limits at breakpoints") {
    const auto phi = jumpy();
    CHECK(phi.dim() == 1);
    CHECK(phi.intervals() == 2);
    CHECK(phi.end_time() == doctest::Approx(1.1));

    CHECK(phi.eval(0.0)[0] == doctest::Approx(1.65).epsilon(1e-14));
    CHECK(phi.eval(0.25)[0] == doctest::Approx(-0.0765625).epsilon(1e-14));
    // left limit at the interior breakpoint, right limit via value_right
    CHECK(phi.eval(0.4)[0] == doctest::Approx(-0.55).epsilon(1e-14));
    CHECK(phi.value_right(1)[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(phi.value_left(1)[0] == doctest::Approx(-0.55).epsilon(1e-14));
    CHECK(phi.eval(1.1)[0] == doctest::Approx(1.4).epsilon(1e-14));
    CHECK(phi.value_left(2)[0] == doctest::Approx(1.4).epsilon(1e-14));

    CHECK(phi.max_interior_jump() == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(smooth().max_interior_jump() <= 1e-14);
    CHECK(phi.coeff_scale() == doctest::Approx(1.1));
}

TEST_CASE("derivative drops the degree and matches hand values") {
    const auto d = smooth().derivative();
    CHECK(d.degree(0) == 1);
    CHECK(d.degree(1) == 0);
    // quadratic piece: phi(s) = 1.65 - 9.25 s + 18.75 s^2 / 2 ... slope at
    // s = 0.2 is -5.5 and at s = 0 is -9.25
    CHECK(d.eval(0.2)[0] == doctest::Approx(-5.5).epsilon(1e-13));
    CHECK(d.value_right(0)[0] == doctest::Approx(-9.25).epsilon(1e-13));
    // linear piece: slope 1.2 / 0.7 everywhere
    CHECK(d.eval(0.9)[0] == doctest::Approx(1.2 / 0.7).epsilon(1e-13));
}

TEST_CASE("multiply_by_time is exact and raises the degree") {
    const auto phi = smooth();
    const auto m = phi.multiply_by_time();
    CHECK(m.degree(0) == 3);
    CHECK(m.degree(1) == 2);
    for (double t : {0.1, 0.33, 0.4, 0.55, 0.9, 1.1}) {
        CHECK(m.eval(t)[0] ==
              doctest::Approx(t * phi.eval(t)[0]).epsilon(1e-13));
    }
    // jumps survive multiplication
    const auto mj = jumpy().multiply_by_time();
    CHECK(mj.value_right(1)[0] == doctest::Approx(0.4 * 0.2).epsilon(1e-13));
    CHECK_THROWS_AS(m.multiply_by_time(), std::invalid_argument);
}

TEST_CASE("legendre basis values agree with the monomial table") {
    for (int a = 0; a < 4; ++a) {
        CHECK(PiecewiseTrajectory::basis(a, 0.0) ==
              doctest::Approx(a % 2 == 0 ? 1.0 : -1.0));
        CHECK(PiecewiseTrajectory::basis(a, 1.0) == doctest::Approx(1.0));
        for (double x : {0.17, 0.3, 0.62, 0.94}) {
            double horner = 0.0;
            for (int k = 3; k >= 0; --k)
                horner = horner * x + PiecewiseTrajectory::MONO[a][k];
            CHECK(PiecewiseTrajectory::basis(a, x) ==
                  doctest::Approx(horner).epsilon(1e-14));
        }
    }
    CHECK(PiecewiseTrajectory::basis(2, 0.3) == doctest::Approx(-0.26));
}

TEST_CASE("antiderivative is the exact running integral") {
    const auto phi = jumpy();
    const auto F = phi.antiderivative();
    CHECK(F.eval(0.0)[0] == doctest::Approx(0.0));
    CHECK(F.max_interior_jump() <= 1e-15);
    CHECK(F.degree(0) == 3);
    CHECK(F.degree(1) == 2);

    // piece integrals: only the Legendre-0 coefficient survives integration,
    // so F(0.4) = 0.4*0.3 and F(1.1) = 0.12 + 0.7*0.8
    CHECK(F.eval(0.4)[0] == doctest::Approx(0.12).epsilon(1e-14));
    CHECK(F.eval(1.1)[0] == doctest::Approx(0.68).epsilon(1e-14));
    // int_0^0.2 (1.65 - 9.25 s + 9.375 s^2) ds = 0.17
    CHECK(F.eval(0.2)[0] == doctest::Approx(0.17).epsilon(1e-14));

    const auto back = F.derivative();
    for (double t : {0.1, 0.3, 0.6, 1.0})
        CHECK(back.eval(t)[0] == doctest::Approx(phi.eval(t)[0]).epsilon(1e-13));

    CHECK_THROWS_AS(F.antiderivative(), std::invalid_argument);
}

TEST_CASE("constant trajectory") {
    const auto c = PiecewiseTrajectory::constant(2.5, 3.0);
    CHECK(c.intervals() == 1);
    CHECK(c.eval(1.7)[0] == doctest::Approx(2.5));
    CHECK(c.derivative().eval(1.7)[0] == doctest::Approx(0.0));
}
