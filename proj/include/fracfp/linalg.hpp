#pragma once

#include <cstddef>
#include <vector>

namespace fracfp::linalg {

// Cholesky solver for a symmetric positive definite tridiagonal matrix.
// diag holds the n diagonal entries, off the n-1 subdiagonal entries.
// Construction factors immediately; throws std::domain_error if a pivot
// is not strictly positive.
class TridiagonalCholesky {
public:
    TridiagonalCholesky(const std::vector<double>& diag,
                        const std::vector<double>& off);

    std::vector<double> solve(const std::vector<double>& rhs) const;
    std::size_t size() const { return l_.size(); }

private:
    std::vector<double> l_;  // diagonal of the Cholesky factor
    std::vector<double> m_;  // subdiagonal of the Cholesky factor
};

// Banded matrix with kl subdiagonals and ku superdiagonals, solved by LU
// with partial pivoting. Row swaps widen the stored upper band to ku+kl,
// so every row keeps a window of 2*kl+ku+1 slots.
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

    // Writable entry; valid for j in [i-kl, i+ku+kl]. Out-of-band access
    // throws std::invalid_argument.
    double& at(std::size_t i, std::size_t j);
    double get(std::size_t i, std::size_t j) const;

    // Factors in place. Throws std::runtime_error on a zero pivot.
    void factor();
    std::vector<double> solve(std::vector<double> rhs) const;

    std::size_t size() const { return n_; }
    bool factored() const { return factored_; }

private:
    std::size_t n_, kl_, ku_, width_;
    bool factored_ = false;
    std::vector<double> a_;
    std::vector<std::size_t> piv_;

    double& slot(std::size_t i, std::size_t j);
    const double& slot(std::size_t i, std::size_t j) const;
};

struct QuadratureRule {
    std::vector<double> nodes;    // ascending, in (0,1)
    std::vector<double> weights;  // sum to 1
};

// Gauss-Legendre rule mapped to [0,1]; exact for polynomials of degree
// 2*npts-1. Supported npts: 1..5.
const QuadratureRule& gauss_rule(int npts);

}  // namespace fracfp::linalg
