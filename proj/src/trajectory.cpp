#include "fracfp/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfp {

const double PiecewiseTrajectory::MONO[4][4] = {
    {1.0, 0.0, 0.0, 0.0},
    {-1.0, 2.0, 0.0, 0.0},
    {1.0, -6.0, 6.0, 0.0},
    {-1.0, 12.0, -30.0, 20.0},
};

double PiecewiseTrajectory::basis(int a, double x) {
    switch (a) {
        case 0: return 1.0;
        case 1: return 2.0 * x - 1.0;
        case 2: return (6.0 * x - 6.0) * x + 1.0;
        case 3: return ((20.0 * x - 30.0) * x + 12.0) * x - 1.0;
        default: throw std::invalid_argument("basis: degree out of range");
    }
}

PiecewiseTrajectory::PiecewiseTrajectory(
    std::vector<double> breakpoints,
    std::vector<std::vector<std::vector<double>>> coeffs)
    : breakpoints_(std::move(breakpoints)), coeffs_(std::move(coeffs)) {
    if (breakpoints_.size() < 2)
        throw std::invalid_argument("PiecewiseTrajectory: need at least one interval");
    if (breakpoints_.front() != 0.0)
        throw std::invalid_argument("PiecewiseTrajectory: partition must start at 0");
    for (std::size_t n = 1; n < breakpoints_.size(); ++n)
        if (!(breakpoints_[n] > breakpoints_[n - 1]))
            throw std::invalid_argument("PiecewiseTrajectory: breakpoints not increasing");
    if (coeffs_.size() + 1 != breakpoints_.size())
        throw std::invalid_argument("PiecewiseTrajectory: one coefficient block per interval");
    if (coeffs_[0].empty() || coeffs_[0][0].empty())
        throw std::invalid_argument("PiecewiseTrajectory: empty coefficient block");
    dim_ = coeffs_[0][0].size();
    for (const auto& block : coeffs_) {
        if (block.empty() || block.size() > 4)
            throw std::invalid_argument("PiecewiseTrajectory: interval degree must be in [0,3]");
        for (const auto& c : block)
            if (c.size() != dim_)
                throw std::invalid_argument("PiecewiseTrajectory: inconsistent coefficient dimension");
    }
}

PiecewiseTrajectory PiecewiseTrajectory::constant(double value, double T) {
    return PiecewiseTrajectory({0.0, T}, {{{value}}});
}

PiecewiseTrajectory PiecewiseTrajectory::scalar(std::vector<double> breakpoints,
                                                std::vector<std::vector<double>> coeffs) {
    std::vector<std::vector<std::vector<double>>> blocks(coeffs.size());
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        for (double c : coeffs[n]) blocks[n].push_back({c});
    return PiecewiseTrajectory(std::move(breakpoints), std::move(blocks));
}

int PiecewiseTrajectory::degree(std::size_t n) const {
    return static_cast<int>(coeffs_.at(n).size()) - 1;
}

const std::vector<std::vector<double>>& PiecewiseTrajectory::coeff_block(std::size_t n) const {
    return coeffs_.at(n);
}

std::size_t PiecewiseTrajectory::find_interval(double t) const {
    // left-limit convention: t in (t_{n-1}, t_n] maps to interval n-1
    if (t < 0.0 || t > breakpoints_.back())
        throw std::domain_error("PiecewiseTrajectory: t outside [0, T]");
    if (t == 0.0) return 0;
    std::size_t lo = 0, hi = breakpoints_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (breakpoints_[mid] < t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::vector<double> PiecewiseTrajectory::eval(double t) const {
    const std::size_t n = find_interval(t);
    const double a = breakpoints_[n], b = breakpoints_[n + 1];
    const double x = (t - a) / (b - a);
    std::vector<double> out(dim_, 0.0);
    for (std::size_t deg = 0; deg < coeffs_[n].size(); ++deg) {
        const double q = basis(static_cast<int>(deg), x);
        const auto& c = coeffs_[n][deg];
        for (std::size_t i = 0; i < dim_; ++i) out[i] += q * c[i];
    }
    return out;
}

std::vector<double> PiecewiseTrajectory::value_right(std::size_t n) const {
    if (n >= intervals())
        throw std::domain_error("value_right: breakpoint has no interval to the right");
    std::vector<double> out(dim_, 0.0);
    for (std::size_t deg = 0; deg < coeffs_[n].size(); ++deg) {
        const double q = (deg % 2 == 0) ? 1.0 : -1.0;  // Q_a(0) = (-1)^a
        const auto& c = coeffs_[n][deg];
        for (std::size_t i = 0; i < dim_; ++i) out[i] += q * c[i];
    }
    return out;
}

std::vector<double> PiecewiseTrajectory::value_left(std::size_t n) const {
    if (n == 0 || n > intervals())
        throw std::domain_error("value_left: breakpoint has no interval to the left");
    std::vector<double> out(dim_, 0.0);
    for (const auto& c : coeffs_[n - 1])  // Q_a(1) = 1
        for (std::size_t i = 0; i < dim_; ++i) out[i] += c[i];
    return out;
}

double PiecewiseTrajectory::max_interior_jump() const {
    double worst = 0.0;
    for (std::size_t n = 1; n < intervals(); ++n) {
        const auto lo = value_left(n);
        const auto hi = value_right(n);
        for (std::size_t i = 0; i < dim_; ++i)
            worst = std::max(worst, std::abs(hi[i] - lo[i]));
    }
    return worst;
}

double PiecewiseTrajectory::coeff_scale() const {
    double s = 0.0;
    for (const auto& block : coeffs_)
        for (const auto& c : block)
            for (double v : c) s = std::max(s, std::abs(v));
    return s;
}

PiecewiseTrajectory PiecewiseTrajectory::derivative() const {
    // d/dx Q1 = 2 Q0, d/dx Q2 = 6 Q1, d/dx Q3 = 10 Q2 + 2 Q0; chain rule 1/h.
    PiecewiseTrajectory out;
    out.breakpoints_ = breakpoints_;
    out.dim_ = dim_;
    out.coeffs_.resize(intervals());
    for (std::size_t n = 0; n < intervals(); ++n) {
        const double h = breakpoints_[n + 1] - breakpoints_[n];
        const auto& c = coeffs_[n];
        const std::size_t nd = c.size() > 1 ? c.size() - 1 : 1;
        std::vector<std::vector<double>> d(nd, std::vector<double>(dim_, 0.0));
        for (std::size_t i = 0; i < dim_; ++i) {
            if (c.size() > 1) d[0][i] += 2.0 * c[1][i] / h;
            if (c.size() > 3) d[0][i] += 2.0 * c[3][i] / h;
            if (c.size() > 2) d[1][i] += 6.0 * c[2][i] / h;
            if (c.size() > 3) d[2][i] += 10.0 * c[3][i] / h;
        }
        out.coeffs_[n] = std::move(d);
    }
    return out;
}

PiecewiseTrajectory PiecewiseTrajectory::antiderivative() const {
    // monomial-to-Legendre rows: x^k = sum_a INV[k][a] Q_a
    static const double INV[4][4] = {
        {1.0, 0.0, 0.0, 0.0},
        {0.5, 0.5, 0.0, 0.0},
        {1.0 / 3.0, 0.5, 1.0 / 6.0, 0.0},
        {0.25, 0.45, 0.25, 0.05},
    };
    PiecewiseTrajectory out;
    out.breakpoints_ = breakpoints_;
    out.dim_ = dim_;
    out.coeffs_.resize(intervals());
    std::vector<double> carry(dim_, 0.0);  // running integral at interval start
    for (std::size_t n = 0; n < intervals(); ++n) {
        const auto& c = coeffs_[n];
        if (c.size() > 3)
            throw std::invalid_argument("antiderivative: input degree must be <= 2");
        const double h = breakpoints_[n + 1] - breakpoints_[n];
        // local integral in monomials: r_{k+1} = h q_k / (k+1), r_0 = 0
        std::vector<std::vector<double>> r(c.size() + 1,
                                           std::vector<double>(dim_, 0.0));
        for (std::size_t aa = 0; aa < c.size(); ++aa)
            for (std::size_t k = 0; k <= aa; ++k)
                for (std::size_t i = 0; i < dim_; ++i)
                    r[k + 1][i] += h * MONO[aa][k] * c[aa][i] / (k + 1.0);
        std::vector<std::vector<double>> d(c.size() + 1,
                                           std::vector<double>(dim_, 0.0));
        for (std::size_t k = 0; k < r.size(); ++k)
            for (std::size_t aa = 0; aa <= k; ++aa)
                for (std::size_t i = 0; i < dim_; ++i)
                    d[aa][i] += INV[k][aa] * r[k][i];
        for (std::size_t i = 0; i < dim_; ++i) d[0][i] += carry[i];
        for (std::size_t k = 1; k < r.size(); ++k)  // piece integral = value at x=1
            for (std::size_t i = 0; i < dim_; ++i) carry[i] += r[k][i];
        out.coeffs_[n] = std::move(d);
    }
    return out;
}

PiecewiseTrajectory PiecewiseTrajectory::multiply_by_time() const {
    // t = a + h x on interval [a,b]; x Q_n expands by the three-term
    // recurrence x Q_n = n/(2(2n+1)) Q_{n-1} + Q_n/2 + (n+1)/(2(2n+1)) Q_{n+1}.
    PiecewiseTrajectory out;
    out.breakpoints_ = breakpoints_;
    out.dim_ = dim_;
    out.coeffs_.resize(intervals());
    for (std::size_t n = 0; n < intervals(); ++n) {
        const auto& c = coeffs_[n];
        if (c.size() > 3)
            throw std::invalid_argument("multiply_by_time: input degree must be <= 2");
        const double a = breakpoints_[n], h = breakpoints_[n + 1] - a;
        std::vector<std::vector<double>> d(c.size() + 1, std::vector<double>(dim_, 0.0));
        for (std::size_t deg = 0; deg < c.size(); ++deg) {
            const double k = static_cast<double>(deg);
            const double lo = k / (2.0 * (2.0 * k + 1.0));
            const double hi = (k + 1.0) / (2.0 * (2.0 * k + 1.0));
            for (std::size_t i = 0; i < dim_; ++i) {
                const double v = c[deg][i];
                d[deg][i] += (a + 0.5 * h) * v;
                if (deg > 0) d[deg - 1][i] += h * lo * v;
                d[deg + 1][i] += h * hi * v;
            }
        }
        out.coeffs_[n] = std::move(d);
    }
    return out;
}

}  // namespace fracfp
