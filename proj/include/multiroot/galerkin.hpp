#pragma once

#include <functional>
#include <span>
#include <vector>

#include "multiroot/legendre.hpp"
#include "multiroot/system.hpp"

namespace multiroot {

/// Pointwise right-hand side g(u, x): writes n values into `out`.
using PointwiseMap =
    std::function<void(std::span<const double> u, std::span<const double> x, std::span<double> out)>;

/// Pointwise Jacobian dg_i/du_l written row-major into `out` (n*n values).
using PointwiseJacobian = PointwiseMap;

/// A coupled semilinear elliptic system on a box.
///
/// Dirichlet problems read  -d_i Lap u_i = g_i(u, x),
/// NoFlux problems read      d_i Lap u_i = g_i(u, x).
struct ProblemDef {
    int dim = 1;
    int n_fields = 1;
    std::vector<double> diffusion;
    PointwiseMap nonlinearity;
    PointwiseJacobian nonlinearity_jac;
    BoundaryKind bc = BoundaryKind::Dirichlet;
    std::vector<Interval> domain;
};

/// Galerkin discretization F(a) = d_i S a_i -/+ q_i(a) with the nonlinear
/// term evaluated pseudospectrally at tensor LGL nodes.
///
/// Coefficient layout: fields are concatenated; inside a 2D field the
/// x-index varies fastest, so a_i[k + (N+1) j] multiplies phi_k(x) phi_j(y).
class DiscreteSystem final : public NonlinearSystem {
public:
    DiscreteSystem(ProblemDef problem, int N, int oversample = 1);

    Eigen::Index size() const override { return n_fields() * field_size(); }
    Vector residual(const Vector& a) const override;
    Matrix jacobian(const Vector& a) const override;

    const ProblemDef& problem() const { return problem_; }
    int degree_cap() const { return N_; }
    int dim() const { return problem_.dim; }
    int n_fields() const { return problem_.n_fields; }
    Eigen::Index modes_per_dim() const { return N_ + 1; }
    Eigen::Index field_size() const { return field_size_; }
    Eigen::Index quad_points() const { return quad_points_; }
    const std::vector<Basis1D>& bases() const { return bases_; }
    const std::vector<OperatorPair1D>& operators() const { return ops_; }

    /// +1 for NoFlux (d u'' = g), -1 for Dirichlet (-d Lap u = g).
    double nonlinear_sign() const { return sign_; }

    /// S a_i for one field, via the Kronecker identity in 2D.
    Vector apply_linear(const Vector& field) const;

    /// Dense S; only for Jacobian assembly and tests.
    const Matrix& linear_block() const { return linear_dense_; }

    /// Field values at the quadrature points; column i is field i, x fastest.
    Matrix nodal_values(const Vector& a) const;

    /// q_i = T^T W g_i for nodal data laid out like nodal_values().
    Vector project(const Matrix& nodal) const;

    /// Physical coordinates of quadrature point p (x fastest).
    std::vector<double> quad_point(Eigen::Index p) const;

    /// Coefficients whose nodal values best match `nodal` in the discrete
    /// weighted least-squares sense (interpolation when T is invertible).
    Vector fit_nodal(const Matrix& nodal) const;

    /// Field values on a uniform grid of `resolution` points per direction.
    Matrix to_grid(const Vector& a, int resolution) const;

    /// Physical coordinates of the uniform grid used by to_grid().
    std::vector<std::vector<double>> grid_axes(int resolution) const;

private:
    Matrix nonlinear_block(const Vector& weighted_derivative) const;

    ProblemDef problem_;
    int N_;
    double sign_;
    Eigen::Index field_size_;
    Eigen::Index quad_points_;
    std::vector<Basis1D> bases_;
    std::vector<OperatorPair1D> ops_;
    std::vector<Matrix> quad_eval_;           // per direction, M x (N+1)
    std::vector<Vector> quad_weights_;        // per direction, physical weights
    std::vector<std::vector<double>> quad_nodes_; // per direction, physical nodes
    Vector weights_;                          // tensorized weights, x fastest
    Matrix linear_dense_;
};

/// Zero-pads or truncates modal coefficients from degree cap N_from to N_to.
Vector resize_coefficients(const Vector& a, int n_fields, int dim, int N_from, int N_to);

} // namespace multiroot
