#pragma once

#include <utility>
#include <vector>

#include "multiroot/types.hpp"

namespace multiroot {

/// Value of the Legendre polynomial L_k at x, by the three-term recurrence.
double eval_legendre(int k, double x);

/// Value and first derivative (L_k(x), L'_k(x)).
std::pair<double, double> eval_legendre_with_derivative(int k, double x);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Legendre-Gauss-Lobatto rule with N+1 points on [-1, 1].
///
/// Interior nodes are the roots of L'_N, located by Newton's method from
/// Chebyshev-Lobatto guesses. Throws ConvergenceFailure if a node does not
/// settle within 100 iterations.
QuadratureRule lgl_rule(int N);

enum class BoundaryKind { Dirichlet, NoFlux };

struct Interval {
    double lo = -1.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    double to_physical(double ref) const { return lo + 0.5 * (ref + 1.0) * length(); }
    double to_reference(double phys) const { return 2.0 * (phys - lo) / length() - 1.0; }
};

/// Boundary-adapted modal basis phi_0..phi_N built from Legendre polynomials.
///
///   Dirichlet: phi_k = L_k - L_{k+2}                        (phi_k(+-1) = 0)
///   NoFlux:    phi_k = L_k - k(k+1)/((k+2)(k+3)) L_{k+2}    (phi'_k(+-1) = 0)
///
/// Basis functions are defined on the reference interval [-1, 1]; `interval`
/// records the physical domain they are mapped onto.
class Basis1D {
public:
    Basis1D(BoundaryKind kind, int N, Interval interval);

    BoundaryKind kind() const { return kind_; }
    int degree_cap() const { return N_; }
    int size() const { return N_ + 1; }
    const Interval& interval() const { return interval_; }
    const std::vector<double>& nodes() const { return rule_.nodes; }
    const std::vector<double>& weights() const { return rule_.weights; }

    /// Coefficient multiplying L_{k+2} in phi_k (phi_k = L_k + c_k L_{k+2}).
    double tail_coefficient(int k) const;

    double value(int k, double x_ref) const;
    double derivative(int k, double x_ref) const;

    /// Matrix T with T(m, k) = phi_k(points[m]) for reference points.
    Matrix eval_matrix(const std::vector<double>& points) const;

private:
    BoundaryKind kind_;
    int N_;
    Interval interval_;
    QuadratureRule rule_;
};

/// Throws InvalidDegree if N < 2 and std::invalid_argument on a degenerate interval.
Basis1D make_basis(BoundaryKind kind, int N, Interval interval = {});

/// Stiffness and mass matrices on the physical interval, plus the nodal
/// evaluation matrix at the basis' own LGL nodes.
struct OperatorPair1D {
    Matrix stiffness; // A(k, j) = int phi'_j phi'_k
    Matrix mass;      // B(k, j) = int phi_j phi_k
    Matrix eval_matrix;
};

OperatorPair1D operators_1d(const Basis1D& basis);

} // namespace multiroot
