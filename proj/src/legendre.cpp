#include "multiroot/legendre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "multiroot/errors.hpp"

namespace multiroot {

std::pair<double, double> eval_legendre_with_derivative(int k, double x)
{
    if (k < 0) {
        throw std::invalid_argument("Legendre index must be non-negative");
    }
    if (k == 0) {
        return {1.0, 0.0};
    }
    // (j+1) L_{j+1} = (2j+1) x L_j - j L_{j-1}
    // L'_{j+1} = L'_{j-1} + (2j+1) L_j
    double p_prev = 1.0, p = x;
    double d_prev = 0.0, d = 1.0;
    for (int j = 1; j < k; ++j) {
        const double p_next = ((2.0 * j + 1.0) * x * p - j * p_prev) / (j + 1.0);
        const double d_next = d_prev + (2.0 * j + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    return {p, d};
}

double eval_legendre(int k, double x)
{
    return eval_legendre_with_derivative(k, x).first;
}

QuadratureRule lgl_rule(int N)
{
    if (N < 2) {
        throw InvalidDegree("LGL rule needs N >= 2, got " + std::to_string(N));
    }
    QuadratureRule rule;
    rule.nodes.assign(N + 1, 0.0);
    rule.weights.assign(N + 1, 0.0);
    rule.nodes[0] = -1.0;
    rule.nodes[N] = 1.0;

    const double nn1 = static_cast<double>(N) * (N + 1);
    for (int j = 1; j < N; ++j) {
        double x = -std::cos(std::numbers::pi * j / N);
        bool settled = false;
        for (int it = 0; it < 100; ++it) {
            const auto [L, dL] = eval_legendre_with_derivative(N, x);
            // Legendre ODE: (1 - x^2) L'' = 2x L' - N(N+1) L
            const double d2L = (2.0 * x * dL - nn1 * L) / (1.0 - x * x);
            const double dx = dL / d2L;
            x -= dx;
            if (std::abs(dL) <= 1e-14 || std::abs(dx) <= 1e-15) {
                settled = true;
                break;
            }
        }
        if (!settled) {
            throw ConvergenceFailure("LGL node " + std::to_string(j) + " of N=" + std::to_string(N) +
                                     " did not converge");
        }
        rule.nodes[j] = x;
    }
    // Enforce exact antisymmetry of the node set.
    for (int j = 0; j <= N / 2; ++j) {
        const double half = 0.5 * (rule.nodes[N - j] - rule.nodes[j]);
        rule.nodes[j] = -half;
        rule.nodes[N - j] = half;
    }
    if (N % 2 == 0) {
        rule.nodes[N / 2] = 0.0;
    }
    for (int j = 0; j <= N; ++j) {
        const double L = eval_legendre(N, rule.nodes[j]);
        rule.weights[j] = 2.0 / (nn1 * L * L);
    }
    return rule;
}

Basis1D::Basis1D(BoundaryKind kind, int N, Interval interval)
    : kind_(kind), N_(N), interval_(interval), rule_(lgl_rule(N))
{
}

double Basis1D::tail_coefficient(int k) const
{
    if (kind_ == BoundaryKind::Dirichlet) {
        return -1.0;
    }
    const double kk = k;
    return -(kk * (kk + 1.0)) / ((kk + 2.0) * (kk + 3.0));
}

double Basis1D::value(int k, double x_ref) const
{
    return eval_legendre(k, x_ref) + tail_coefficient(k) * eval_legendre(k + 2, x_ref);
}

double Basis1D::derivative(int k, double x_ref) const
{
    return eval_legendre_with_derivative(k, x_ref).second +
           tail_coefficient(k) * eval_legendre_with_derivative(k + 2, x_ref).second;
}

Matrix Basis1D::eval_matrix(const std::vector<double>& points) const
{
    Matrix T(static_cast<Eigen::Index>(points.size()), size());
    for (std::size_t m = 0; m < points.size(); ++m) {
        for (int k = 0; k <= N_; ++k) {
            T(static_cast<Eigen::Index>(m), k) = value(k, points[m]);
        }
    }
    return T;
}

Basis1D make_basis(BoundaryKind kind, int N, Interval interval)
{
    if (N < 2) {
        throw InvalidDegree("basis needs N >= 2, got " + std::to_string(N));
    }
    if (!(interval.hi > interval.lo)) {
        throw std::invalid_argument("degenerate interval");
    }
    return Basis1D(kind, N, interval);
}

OperatorPair1D operators_1d(const Basis1D& basis)
{
    const int n = basis.size();
    // Entries are polynomials of degree <= 2N+4; N+4 LGL points (exact to 2N+5) suffice.
    const QuadratureRule fine = lgl_rule(basis.degree_cap() + 4);
    const auto q = static_cast<Eigen::Index>(fine.nodes.size());

    Matrix V(q, n), D(q, n);
    for (Eigen::Index m = 0; m < q; ++m) {
        for (int k = 0; k < n; ++k) {
            V(m, k) = basis.value(k, fine.nodes[m]);
            D(m, k) = basis.derivative(k, fine.nodes[m]);
        }
    }
    const Vector w = Eigen::Map<const Vector>(fine.weights.data(), q);

    const double ell = basis.interval().length();
    OperatorPair1D ops;
    ops.stiffness = (2.0 / ell) * (D.transpose() * w.asDiagonal() * D);
    ops.mass = (0.5 * ell) * (V.transpose() * w.asDiagonal() * V);
    // Symmetrize to remove summation-order asymmetry.
    ops.stiffness = 0.5 * (ops.stiffness + ops.stiffness.transpose()).eval();
    ops.mass = 0.5 * (ops.mass + ops.mass.transpose()).eval();
    ops.eval_matrix = basis.eval_matrix(basis.nodes());
    return ops;
}

} // namespace multiroot
