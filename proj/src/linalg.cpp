#include "fracfp/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfp::linalg {

TridiagonalCholesky::TridiagonalCholesky(const std::vector<double>& diag,
                                         const std::vector<double>& off) {
    const std::size_t n = diag.size();
    if (n == 0 || off.size() + 1 != n)
        throw std::invalid_argument("TridiagonalCholesky: size mismatch");
    l_.resize(n);
    m_.resize(n);
    m_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) m_[i] = off[i - 1] / l_[i - 1];
        const double p = diag[i] - m_[i] * m_[i];
        if (!(p > 0.0))
            throw std::domain_error("TridiagonalCholesky: matrix not positive definite at row " +
                                    std::to_string(i));
        l_[i] = std::sqrt(p);
    }
}

std::vector<double> TridiagonalCholesky::solve(const std::vector<double>& rhs) const {
    const std::size_t n = l_.size();
    if (rhs.size() != n)
        throw std::invalid_argument("TridiagonalCholesky::solve: rhs size mismatch");
    std::vector<double> x(n);
    x[0] = rhs[0] / l_[0];
    for (std::size_t i = 1; i < n; ++i)
        x[i] = (rhs[i] - m_[i] * x[i - 1]) / l_[i];
    x[n - 1] /= l_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (x[i] / l_[i]) - (m_[i + 1] / l_[i]) * x[i + 1];
    return x;
}

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1),
      a_(n * width_, 0.0), piv_(n, 0) {
    if (n == 0) throw std::invalid_argument("BandedMatrix: empty matrix");
}

double& BandedMatrix::slot(std::size_t i, std::size_t j) {
    return a_[i * width_ + (j + kl_ - i)];
}

const double& BandedMatrix::slot(std::size_t i, std::size_t j) const {
    return a_[i * width_ + (j + kl_ - i)];
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || j + kl_ < i || j > i + ku_ + kl_)
        throw std::invalid_argument("BandedMatrix::at: index outside band");
    return slot(i, j);
}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::invalid_argument("BandedMatrix::get: index out of range");
    if (j + kl_ < i || j > i + ku_ + kl_) return 0.0;
    return slot(i, j);
}

void BandedMatrix::factor() {
    if (factored_) throw std::runtime_error("BandedMatrix::factor: already factored");
    for (std::size_t r = 0; r < n_; ++r) {
        const std::size_t ilast = std::min(n_ - 1, r + kl_);
        const std::size_t clast = std::min(n_ - 1, r + ku_ + kl_);
        std::size_t p = r;
        for (std::size_t i = r + 1; i <= ilast; ++i)
            if (std::abs(slot(i, r)) > std::abs(slot(p, r))) p = i;
        piv_[r] = p;
        if (p != r)
            for (std::size_t c = r; c <= clast; ++c)
                std::swap(slot(r, c), slot(p, c));
        const double pivot = slot(r, r);
        if (pivot == 0.0)
            throw std::runtime_error("BandedMatrix::factor: singular at column " +
                                     std::to_string(r));
        for (std::size_t i = r + 1; i <= ilast; ++i) {
            const double mult = slot(i, r) / pivot;
            slot(i, r) = mult;
            if (mult != 0.0)
                for (std::size_t c = r + 1; c <= clast; ++c)
                    slot(i, c) -= mult * slot(r, c);
        }
    }
    factored_ = true;
}

std::vector<double> BandedMatrix::solve(std::vector<double> rhs) const {
    if (!factored_) throw std::runtime_error("BandedMatrix::solve: factor() not called");
    if (rhs.size() != n_) throw std::invalid_argument("BandedMatrix::solve: rhs size mismatch");
    for (std::size_t r = 0; r < n_; ++r) {
        if (piv_[r] != r) std::swap(rhs[r], rhs[piv_[r]]);
        const std::size_t ilast = std::min(n_ - 1, r + kl_);
        for (std::size_t i = r + 1; i <= ilast; ++i)
            rhs[i] -= slot(i, r) * rhs[r];
    }
    for (std::size_t r = n_; r-- > 0;) {
        const std::size_t clast = std::min(n_ - 1, r + ku_ + kl_);
        double s = rhs[r];
        for (std::size_t c = r + 1; c <= clast; ++c)
            s -= slot(r, c) * rhs[c];
        rhs[r] = s / slot(r, r);
    }
    return rhs;
}

namespace {

QuadratureRule make_rule(int npts) {
    // Classical nodes on [-1,1] mapped by x -> (x+1)/2, w -> w/2.
    std::vector<double> x, w;
    switch (npts) {
        case 1:
            x = {0.0};
            w = {2.0};
            break;
        case 2: {
            const double r = 1.0 / std::sqrt(3.0);
            x = {-r, r};
            w = {1.0, 1.0};
            break;
        }
        case 3: {
            const double r = std::sqrt(3.0 / 5.0);
            x = {-r, 0.0, r};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        }
        case 4: {
            const double s = std::sqrt(6.0 / 5.0);
            const double r1 = std::sqrt((3.0 - 2.0 * s) / 7.0);
            const double r2 = std::sqrt((3.0 + 2.0 * s) / 7.0);
            const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
            const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
            x = {-r2, -r1, r1, r2};
            w = {w2, w1, w1, w2};
            break;
        }
        case 5: {
            const double s = std::sqrt(10.0 / 7.0);
            const double r1 = std::sqrt(5.0 - 2.0 * s) / 3.0;
            const double r2 = std::sqrt(5.0 + 2.0 * s) / 3.0;
            const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
            const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
            x = {-r2, -r1, 0.0, r1, r2};
            w = {w2, w1, 128.0 / 225.0, w1, w2};
            break;
        }
        default:
            throw std::invalid_argument("gauss_rule: npts must be in [1,5]");
    }
    QuadratureRule rule;
    for (std::size_t i = 0; i < x.size(); ++i) {
        rule.nodes.push_back(0.5 * (x[i] + 1.0));
        rule.weights.push_back(0.5 * w[i]);
    }
    return rule;
}

}  // namespace

const QuadratureRule& gauss_rule(int npts) {
    static const QuadratureRule rules[5] = {
        make_rule(1), make_rule(2), make_rule(3), make_rule(4), make_rule(5)};
    if (npts < 1 || npts > 5)
        throw std::invalid_argument("gauss_rule: npts must be in [1,5]");
    return rules[npts - 1];
}

}  // namespace fracfp::linalg
