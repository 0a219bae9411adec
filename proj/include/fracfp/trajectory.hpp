#pragma once

#include <cstddef>
#include <vector>

namespace fracfp {

// Vector-valued piecewise polynomial on a time partition
// 0 = t_0 < t_1 < ... < t_N. Each interval carries coefficients in the
// shifted Legendre basis on [t_{n-1}, t_n]:
//   Q0 = 1, Q1 = 2x-1, Q2 = 6x^2-6x+1, Q3 = 20x^3-30x^2+12x-1,
// with x the local coordinate in [0,1]. The public degree cap is 2; degree 3
// appears only through multiply_by_time, which needs the one extra slot so
// that products t*phi stay exactly representable.
class PiecewiseTrajectory {
public:
    // coeffs[n][a] is the basis-a coefficient vector (length dim) on
    // interval n. Throws std::invalid_argument on malformed input.
    PiecewiseTrajectory(std::vector<double> breakpoints,
                        std::vector<std::vector<std::vector<double>>> coeffs);

    // phi identically equal to `value` on [0, T], one interval.
    static PiecewiseTrajectory constant(double value, double T);
    // scalar trajectory from per-interval Legendre coefficient lists
    static PiecewiseTrajectory scalar(std::vector<double> breakpoints,
                                      std::vector<std::vector<double>> coeffs);

    std::size_t dim() const { return dim_; }
    std::size_t intervals() const { return breakpoints_.size() - 1; }
    double end_time() const { return breakpoints_.back(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    int degree(std::size_t n) const;
    const std::vector<std::vector<double>>& coeff_block(std::size_t n) const;

    // Point evaluation. At interior breakpoints and at T this is the limit
    // from the left; at t = 0 the limit from the right.
    std::vector<double> eval(double t) const;
    // One-sided limits at breakpoint n: value_right is X^n_+ (0 <= n < N),
    // value_left is X^n_- (1 <= n <= N).
    std::vector<double> value_right(std::size_t n) const;
    std::vector<double> value_left(std::size_t n) const;
    // largest |X^n_+ - X^n_-| component over interior breakpoints
    double max_interior_jump() const;
    // largest coefficient magnitude; the natural scale for tolerances
    double coeff_scale() const;

    // Interval-wise derivative (degree drops by one; jumps are ignored).
    PiecewiseTrajectory derivative() const;
    // Exact running integral int_0^t phi: continuous, zero at t = 0, degree
    // rises by one (so inputs must have degree <= 2). This is I^1 phi in
    // closed form, which anchors the semigroup checks of the fractional
    // integral at full precision.
    PiecewiseTrajectory antiderivative() const;
    // (M phi)(t) = t * phi(t), exact; raises the degree by one, so inputs
    // must have degree <= 2.
    PiecewiseTrajectory multiply_by_time() const;

    // Legendre basis values at local x in [0,1]
    static double basis(int a, double x);
    // monomial expansion rows: basis a = sum_k MONO[a][k] x^k
    static const double MONO[4][4];

private:
    PiecewiseTrajectory() = default;
    std::size_t find_interval(double t) const;

    std::vector<double> breakpoints_;
    std::vector<std::vector<std::vector<double>>> coeffs_;
    std::size_t dim_ = 0;
};

}  // namespace fracfp
