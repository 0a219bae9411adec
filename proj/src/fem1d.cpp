#include "fracfp/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracfp::fem1d {

namespace {

// Global node k is a degree of freedom iff 1 <= k <= M; its index is k-1.
// Element e spans nodes[e]..nodes[e+1], e = 0..M.

BandedOperator zero_operator(int m, bool symmetric) {
    BandedOperator op;
    op.diag.assign(m, 0.0);
    op.sub.assign(m > 0 ? m - 1 : 0, 0.0);
    op.sup = op.sub;
    op.symmetric = symmetric;
    return op;
}

void check_size(const BandedOperator& op, const std::vector<double>& x,
                const char* who) {
    if (static_cast<int>(x.size()) != op.size())
        throw std::invalid_argument(std::string(who) + ": size mismatch");
}

// element index for x in [x_left, x_right]; nodes map to the element on
// their right except at the far end
std::size_t locate_element(const Mesh1D& mesh, double x) {
    if (x < mesh.x_left() || x > mesh.x_right())
        throw std::domain_error("fe_eval: point outside the domain");
    const auto it = std::upper_bound(mesh.nodes.begin(), mesh.nodes.end(), x);
    const std::size_t hi =
        std::min<std::size_t>(it - mesh.nodes.begin(), mesh.nodes.size() - 1);
    return hi - 1;
}

// endpoint values of the FE function on element e (0 at the boundary nodes)
std::pair<double, double> element_values(const std::vector<double>& c,
                                         std::size_t e, std::size_t m) {
    const double a = e >= 1 && e <= m ? c[e - 1] : 0.0;
    const double b = e + 1 <= m ? c[e] : 0.0;
    return {a, b};
}

}  // namespace

Mesh1D::Mesh1D(std::vector<double> node_coords) : nodes(std::move(node_coords)) {
    if (nodes.size() < 3)
        throw std::invalid_argument("Mesh1D: need at least one interior node");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw std::invalid_argument("Mesh1D: nodes must be strictly increasing");
}

Mesh1D Mesh1D::uniform(double x_left, double x_right, int interior_nodes) {
    if (interior_nodes < 1)
        throw std::invalid_argument("Mesh1D: need at least one interior node");
    if (!(x_right > x_left))
        throw std::invalid_argument("Mesh1D: empty domain");
    std::vector<double> xs(interior_nodes + 2);
    const double h = (x_right - x_left) / (interior_nodes + 1);
    for (int i = 0; i < interior_nodes + 2; ++i) xs[i] = x_left + h * i;
    xs.back() = x_right;
    return Mesh1D(std::move(xs));
}

double Mesh1D::max_h() const {
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        h = std::max(h, nodes[i + 1] - nodes[i]);
    return h;
}

std::vector<double> BandedOperator::apply(const std::vector<double>& x) const {
    check_size(*this, x, "BandedOperator::apply");
    const std::size_t m = diag.size();
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += sub[i - 1] * x[i - 1];
        if (i + 1 < m) v += sup[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

double BandedOperator::inner(const std::vector<double>& x,
                             const std::vector<double>& y) const {
    check_size(*this, x, "BandedOperator::inner");
    const auto oy = apply(y);
    double acc = 0.0;
    for (std::size_t i = 0; i < oy.size(); ++i) acc += x[i] * oy[i];
    return acc;
}

BandedOperator assemble_mass(const FeSpace& space) {
    const auto& xs = space.mesh.nodes;
    const int m = space.dof();
    auto op = zero_operator(m, true);
    for (int e = 0; e <= m; ++e) {
        const double h = xs[e + 1] - xs[e];
        if (e >= 1) op.diag[e - 1] += h / 3.0;
        if (e < m) op.diag[e] += h / 3.0;
        if (e >= 1 && e < m) {
            op.sup[e - 1] += h / 6.0;
            op.sub[e - 1] += h / 6.0;
        }
    }
    return op;
}

BandedOperator assemble_stiffness(const FeSpace& space,
                                  const CoefficientField& coeff) {
    const auto& xs = space.mesh.nodes;
    const int m = space.dof();
    const auto& g3 = linalg::gauss_rule(3);
    auto op = zero_operator(m, true);
    for (int e = 0; e <= m; ++e) {
        const double h = xs[e + 1] - xs[e];
        double kint = 0.0;
        for (std::size_t q = 0; q < g3.nodes.size(); ++q) {
            const double k = coeff.kappa(xs[e] + h * g3.nodes[q]);
            if (!(k > 0.0))
                throw std::invalid_argument(
                    "assemble_stiffness: kappa sample must be positive");
            kint += g3.weights[q] * k;
        }
        // integral(kappa)/h^2; the unit-weight rule already divides by h once
        const double s = kint / h;
        if (e >= 1) op.diag[e - 1] += s;
        if (e < m) op.diag[e] += s;
        if (e >= 1 && e < m) {
            op.sup[e - 1] -= s;
            op.sub[e - 1] -= s;
        }
    }
    return op;
}

BandedOperator assemble_convection(const FeSpace& space,
                                   const CoefficientField& coeff, double t) {
    const auto& xs = space.mesh.nodes;
    const int m = space.dof();
    const auto& g3 = linalg::gauss_rule(3);
    auto op = zero_operator(m, false);
    for (int e = 0; e <= m; ++e) {
        const double h = xs[e + 1] - xs[e];
        double int_left = 0.0, int_right = 0.0;  // integral(F * hat) on e
        for (std::size_t q = 0; q < g3.nodes.size(); ++q) {
            const double xi = g3.nodes[q];
            const double fv = g3.weights[q] * h * coeff.F(xs[e] + h * xi, t);
            int_left += fv * (1.0 - xi);
            int_right += fv * xi;
        }
        // rows carry the test-function derivative: -1/h left hat, +1/h right
        if (e >= 1) op.diag[e - 1] -= int_left / h;
        if (e < m) op.diag[e] += int_right / h;
        if (e >= 1 && e < m) {
            op.sup[e - 1] -= int_right / h;
            op.sub[e - 1] += int_left / h;
        }
    }
    return op;
}

std::vector<double> load_vector(const FeSpace& space,
                                const std::function<double(double)>& f) {
    const auto& xs = space.mesh.nodes;
    const int m = space.dof();
    const auto& g5 = linalg::gauss_rule(5);
    std::vector<double> load(m, 0.0);
    for (int e = 0; e <= m; ++e) {
        const double h = xs[e + 1] - xs[e];
        for (std::size_t q = 0; q < g5.nodes.size(); ++q) {
            const double xi = g5.nodes[q];
            const double fv = g5.weights[q] * h * f(xs[e] + h * xi);
            if (e >= 1) load[e - 1] += fv * (1.0 - xi);
            if (e < m) load[e] += fv * xi;
        }
    }
    return load;
}

std::vector<double> l2_project(const FeSpace& space,
                               const std::function<double(double)>& v) {
    const auto mass = assemble_mass(space);
    const linalg::TridiagonalCholesky chol(mass.diag, mass.sup);
    return chol.solve(load_vector(space, v));
}

std::vector<double> ritz_project(const FeSpace& space,
                                 const CoefficientField& coeff,
                                 const std::function<double(double)>& v,
                                 const std::function<double(double)>& v_prime) {
    const auto& xs = space.mesh.nodes;
    const int m = space.dof();
    const auto& g5 = linalg::gauss_rule(5);
    std::vector<double> rhs(m, 0.0);
    double vmax = 0.0;
    for (int e = 0; e <= m; ++e) {
        const double h = xs[e + 1] - xs[e];
        for (std::size_t q = 0; q < g5.nodes.size(); ++q) {
            const double xi = g5.nodes[q];
            const double x = xs[e] + h * xi;
            const double vx = v(x);
            vmax = std::max(vmax, std::abs(vx));
            const double flux = coeff.kappa(x) * v_prime(x);
            const double w = g5.weights[q] * h;
            if (e >= 1) rhs[e - 1] += w * (vx * (1.0 - xi) - flux / h);
            if (e < m) rhs[e] += w * (vx * xi + flux / h);
        }
    }
    const double btol = 1e-8 * (1.0 + vmax);
    if (std::abs(v(space.mesh.x_left())) > btol ||
        std::abs(v(space.mesh.x_right())) > btol)
        throw std::invalid_argument(
            "ritz_project: input does not vanish on the boundary");

    const auto stiff = assemble_stiffness(space, coeff);
    const auto mass = assemble_mass(space);
    std::vector<double> diag(m), off(m > 0 ? m - 1 : 0);
    for (int i = 0; i < m; ++i) diag[i] = stiff.diag[i] + mass.diag[i];
    for (int i = 0; i + 1 < m; ++i) off[i] = stiff.sup[i] + mass.sup[i];
    const linalg::TridiagonalCholesky chol(diag, off);
    return chol.solve(rhs);
}

Norms fe_norms(const FeSpace& space, const std::vector<double>& c) {
    if (static_cast<int>(c.size()) != space.dof())
        throw std::invalid_argument("fe_norms: size mismatch");
    const auto& xs = space.mesh.nodes;
    const std::size_t m = c.size();
    double l2sq = 0.0, h1sq = 0.0;
    for (std::size_t e = 0; e + 1 < xs.size(); ++e) {
        const double h = xs[e + 1] - xs[e];
        const auto [a, b] = element_values(c, e, m);
        l2sq += h * (a * a + a * b + b * b) / 3.0;
        h1sq += (b - a) * (b - a) / h;
    }
    return {std::sqrt(l2sq), std::sqrt(h1sq)};
}

Norms error_norms(const FeSpace& space, const std::vector<double>& c,
                  const std::function<double(double)>& v,
                  const std::function<double(double)>& v_prime) {
    if (static_cast<int>(c.size()) != space.dof())
        throw std::invalid_argument("error_norms: size mismatch");
    const auto& xs = space.mesh.nodes;
    const std::size_t m = c.size();
    const auto& g5 = linalg::gauss_rule(5);
    double l2sq = 0.0, h1sq = 0.0;
    for (std::size_t e = 0; e + 1 < xs.size(); ++e) {
        const double h = xs[e + 1] - xs[e];
        const auto [a, b] = element_values(c, e, m);
        const double slope = (b - a) / h;
        for (std::size_t q = 0; q < g5.nodes.size(); ++q) {
            const double xi = g5.nodes[q];
            const double x = xs[e] + h * xi;
            const double ev = a + (b - a) * xi - v(x);
            const double ep = slope - v_prime(x);
            l2sq += g5.weights[q] * h * ev * ev;
            h1sq += g5.weights[q] * h * ep * ep;
        }
    }
    return {std::sqrt(l2sq), std::sqrt(h1sq)};
}

double fe_eval(const FeSpace& space, const std::vector<double>& c, double x) {
    if (static_cast<int>(c.size()) != space.dof())
        throw std::invalid_argument("fe_eval: size mismatch");
    const auto& xs = space.mesh.nodes;
    const std::size_t e = locate_element(space.mesh, x);
    const auto [a, b] = element_values(c, e, c.size());
    const double xi = (x - xs[e]) / (xs[e + 1] - xs[e]);
    return a + (b - a) * xi;
}

double fe_eval_deriv(const FeSpace& space, const std::vector<double>& c,
                     double x) {
    if (static_cast<int>(c.size()) != space.dof())
        throw std::invalid_argument("fe_eval_deriv: size mismatch");
    const auto& xs = space.mesh.nodes;
    const std::size_t e = locate_element(space.mesh, x);
    const auto [a, b] = element_values(c, e, c.size());
    return (b - a) / (xs[e + 1] - xs[e]);
}

double poincare_constant(double x_left, double x_right) {
    if (!(x_right > x_left))
        throw std::invalid_argument("poincare_constant: empty domain");
    const double d = x_right - x_left;
    return d * d / (std::numbers::pi * std::numbers::pi);
}

double poincare_rayleigh(const FeSpace& space) {
    const auto mass = assemble_mass(space);
    const auto stiff = assemble_stiffness(space, CoefficientField{});
    const linalg::TridiagonalCholesky chol(stiff.diag, stiff.sup);

    // inverse iteration toward the softest mode of the pencil; the constant
    // starting vector overlaps it on any mesh
    std::vector<double> x(space.dof(), 1.0);
    double q_prev = 0.0;
    for (int it = 0; it < 500; ++it) {
        auto y = chol.solve(mass.apply(x));
        const double mn = std::sqrt(mass.inner(y, y));
        for (double& v : y) v /= mn;
        const double q = mass.inner(y, y) / stiff.inner(y, y);
        x = std::move(y);
        if (it > 3 && std::abs(q - q_prev) <= 1e-15 * q) return q;
        q_prev = q;
    }
    return q_prev;
}

}  // namespace fracfp::fem1d
