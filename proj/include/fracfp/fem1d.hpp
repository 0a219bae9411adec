#pragma once

#include <functional>
#include <vector>

#include "fracfp/linalg.hpp"

// Piecewise-linear finite elements on an interval with homogeneous Dirichlet
// conditions. Boundary nodes are eliminated up front: every coefficient vector
// in this module has one entry per interior node, and the function it
// represents vanishes at both ends of the domain.
namespace fracfp::fem1d {

struct Mesh1D {
    // node coordinates including the two boundary points, strictly increasing
    std::vector<double> nodes;

    explicit Mesh1D(std::vector<double> node_coords);
    static Mesh1D uniform(double x_left, double x_right, int interior_nodes);

    int interior() const { return static_cast<int>(nodes.size()) - 2; }
    double x_left() const { return nodes.front(); }
    double x_right() const { return nodes.back(); }
    double max_h() const;
};

struct FeSpace {
    Mesh1D mesh;

    explicit FeSpace(Mesh1D m) : mesh(std::move(m)) {}
    int dof() const { return mesh.interior(); }
};

// Tridiagonal operator on interior-node coefficient vectors. sub[j] sits at
// (row j+1, col j), sup[j] at (row j, col j+1); symmetric operators carry the
// same values in both so apply() needs no special case.
struct BandedOperator {
    std::vector<double> sub, diag, sup;
    bool symmetric = false;

    int size() const { return static_cast<int>(diag.size()); }
    std::vector<double> apply(const std::vector<double>& x) const;
    // x^T (this) y
    double inner(const std::vector<double>& x, const std::vector<double>& y) const;
};

// Problem data. kappa is time-independent; F and g may depend on time. The
// *_bound entries are declared sup-norm bounds consumed by the analysis layer;
// they are not enforced here.
struct CoefficientField {
    std::function<double(double)> kappa = [](double) { return 1.0; };
    std::function<double(double, double)> F = [](double, double) { return 0.0; };
    std::function<double(double, double)> Fdot = [](double, double) { return 0.0; };
    std::function<double(double, double)> g = [](double, double) { return 0.0; };
    double kappa_min = 1.0;
    double F_bound = 0.0;
    double Fdot_bound = 0.0;
};

// integral(phi_j phi_i), assembled from exact element integrals
BandedOperator assemble_mass(const FeSpace& space);

// integral(kappa phi_j' phi_i'), 3-point Gauss per element; every kappa sample
// must be positive
BandedOperator assemble_stiffness(const FeSpace& space,
                                  const CoefficientField& coeff);

// integral(F(x,t) phi_j phi_i'), 3-point Gauss per element; generally
// nonsymmetric (skew for constant F)
BandedOperator assemble_convection(const FeSpace& space,
                                   const CoefficientField& coeff, double t);

// integral(f phi_i), 5-point Gauss per element
std::vector<double> load_vector(const FeSpace& space,
                                const std::function<double(double)>& f);

// orthogonal projection onto the FE space: mass * c = load(v)
std::vector<double> l2_project(const FeSpace& space,
                               const std::function<double(double)>& v);

// elliptic projection: (stiffness + mass) c = integral(kappa v' phi_i' + v phi_i).
// v must satisfy the homogeneous boundary conditions.
std::vector<double> ritz_project(const FeSpace& space,
                                 const CoefficientField& coeff,
                                 const std::function<double(double)>& v,
                                 const std::function<double(double)>& v_prime);

struct Norms {
    double l2 = 0.0;
    double h1_semi = 0.0;
};

// exact L2 and H1-seminorm of the FE function with coefficients c
Norms fe_norms(const FeSpace& space, const std::vector<double>& c);

// L2 and H1-seminorm of (FE function - v), 5-point Gauss per element
Norms error_norms(const FeSpace& space, const std::vector<double>& c,
                  const std::function<double(double)>& v,
                  const std::function<double(double)>& v_prime);

// pointwise value / derivative of the FE function at x in [x_left, x_right];
// the derivative takes the right-hand element at interior nodes
double fe_eval(const FeSpace& space, const std::vector<double>& c, double x);
double fe_eval_deriv(const FeSpace& space, const std::vector<double>& c,
                     double x);

// (x_right - x_left)^2 / pi^2, the sharp constant in |v|^2 <= C |v'|^2
double poincare_constant(double x_left, double x_right);

// largest ||v||^2 / ||v'||^2 over the FE space, via inverse iteration on the
// stiffness-mass pencil; increases to poincare_constant under refinement
double poincare_rayleigh(const FeSpace& space);

}  // namespace fracfp::fem1d
