#include "multiroot/galerkin.hpp"

#include <string>

#include "multiroot/errors.hpp"

namespace multiroot {

namespace {

// (k + nb k') column of pairwise products T(:, k) .* T(:, k').
Matrix pair_products(const Matrix& T)
{
    const Eigen::Index nb = T.cols();
    Matrix P(T.rows(), nb * nb);
    for (Eigen::Index kp = 0; kp < nb; ++kp) {
        for (Eigen::Index k = 0; k < nb; ++k) {
            P.col(k + nb * kp) = T.col(k).cwiseProduct(T.col(kp));
        }
    }
    return P;
}

Matrix kron(const Matrix& P, const Matrix& Q)
{
    Matrix K(P.rows() * Q.rows(), P.cols() * Q.cols());
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            K.block(i * Q.rows(), j * Q.cols(), Q.rows(), Q.cols()) = P(i, j) * Q;
        }
    }
    return K;
}

} // namespace

DiscreteSystem::DiscreteSystem(ProblemDef problem, int N, int oversample)
    : problem_(std::move(problem)), N_(N)
{
    if (problem_.dim != 1 && problem_.dim != 2) {
        throw UnsupportedDim("dimension must be 1 or 2, got " + std::to_string(problem_.dim));
    }
    if (N < 2) {
        throw InvalidDegree("N must be >= 2, got " + std::to_string(N));
    }
    if (oversample < 1) {
        throw std::invalid_argument("oversample must be >= 1");
    }
    if (problem_.n_fields < 1 || static_cast<int>(problem_.diffusion.size()) != problem_.n_fields) {
        throw std::invalid_argument("diffusion must hold one coefficient per field");
    }
    if (static_cast<int>(problem_.domain.size()) != problem_.dim) {
        throw std::invalid_argument("domain must hold one interval per dimension");
    }
    if (!problem_.nonlinearity || !problem_.nonlinearity_jac) {
        throw std::invalid_argument("problem needs a nonlinearity and its Jacobian");
    }
    sign_ = problem_.bc == BoundaryKind::NoFlux ? 1.0 : -1.0;

    const int quad_degree = oversample * N;
    const QuadratureRule rule = lgl_rule(quad_degree);
    for (int d = 0; d < problem_.dim; ++d) {
        bases_.push_back(make_basis(problem_.bc, N, problem_.domain[d]));
        ops_.push_back(operators_1d(bases_.back()));
        quad_eval_.push_back(oversample == 1 ? ops_.back().eval_matrix
                                             : bases_.back().eval_matrix(rule.nodes));
        const Interval& iv = problem_.domain[d];
        Vector w = Eigen::Map<const Vector>(rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
        quad_weights_.push_back(0.5 * iv.length() * w);
        std::vector<double> phys;
        phys.reserve(rule.nodes.size());
        for (double x : rule.nodes) {
            phys.push_back(iv.to_physical(x));
        }
        quad_nodes_.push_back(std::move(phys));
    }

    const Eigen::Index nb = N_ + 1;
    const Eigen::Index M = quad_degree + 1;
    if (problem_.dim == 1) {
        field_size_ = nb;
        quad_points_ = M;
        weights_ = quad_weights_[0];
        linear_dense_ = ops_[0].stiffness;
    } else {
        field_size_ = nb * nb;
        quad_points_ = M * M;
        weights_.resize(M * M);
        for (Eigen::Index n = 0; n < M; ++n) {
            weights_.segment(n * M, M) = quad_weights_[1](n) * quad_weights_[0];
        }
        const auto& x = ops_[0];
        const auto& y = ops_[1];
        linear_dense_ = kron(y.stiffness, x.mass) + kron(y.mass, x.stiffness.transpose());
    }
}

Vector DiscreteSystem::apply_linear(const Vector& field) const
{
    if (problem_.dim == 1) {
        return ops_[0].stiffness * field;
    }
    const Eigen::Index nb = N_ + 1;
    const Eigen::Map<const Matrix> X(field.data(), nb, nb);
    const auto& x = ops_[0];
    const auto& y = ops_[1];
    // (A_y (x) B_x + B_y (x) A_x^T) vec(X) = vec(B_x X A_y^T + A_x^T X B_y^T)
    Matrix Y = x.mass * X * y.stiffness.transpose() + x.stiffness.transpose() * X * y.mass.transpose();
    return Eigen::Map<const Vector>(Y.data(), nb * nb);
}

Matrix DiscreteSystem::nodal_values(const Vector& a) const
{
    if (a.size() != size()) {
        throw DimensionMismatch("coefficient vector has length " + std::to_string(a.size()) +
                                ", expected " + std::to_string(size()));
    }
    const int n = problem_.n_fields;
    Matrix U(quad_points_, n);
    const Eigen::Index nb = N_ + 1;
    for (int i = 0; i < n; ++i) {
        const auto block = a.segment(i * field_size_, field_size_);
        if (problem_.dim == 1) {
            U.col(i) = quad_eval_[0] * block;
        } else {
            const Eigen::Map<const Matrix> X(block.data(), nb, nb);
            const Matrix V = quad_eval_[0] * X * quad_eval_[1].transpose();
            U.col(i) = Eigen::Map<const Vector>(V.data(), V.size());
        }
    }
    return U;
}

Vector DiscreteSystem::project(const Matrix& nodal) const
{
    const int n = static_cast<int>(nodal.cols());
    Vector q(n * field_size_);
    const Eigen::Index nb = N_ + 1;
    for (int i = 0; i < n; ++i) {
        const Vector wg = weights_.cwiseProduct(nodal.col(i));
        if (problem_.dim == 1) {
            q.segment(i * field_size_, field_size_) = quad_eval_[0].transpose() * wg;
        } else {
            const Eigen::Index M = quad_eval_[0].rows();
            const Eigen::Map<const Matrix> G(wg.data(), M, M);
            const Matrix Q = quad_eval_[0].transpose() * G * quad_eval_[1];
            q.segment(i * field_size_, field_size_) = Eigen::Map<const Vector>(Q.data(), nb * nb);
        }
    }
    return q;
}

std::vector<double> DiscreteSystem::quad_point(Eigen::Index p) const
{
    const auto M = static_cast<Eigen::Index>(quad_nodes_[0].size());
    if (problem_.dim == 1) {
        return {quad_nodes_[0][p]};
    }
    return {quad_nodes_[0][p % M], quad_nodes_[1][p / M]};
}

Vector DiscreteSystem::residual(const Vector& a) const
{
    const Matrix U = nodal_values(a);
    const int n = problem_.n_fields;
    Matrix G(quad_points_, n);
    std::vector<double> u(n), g(n);
    for (Eigen::Index p = 0; p < quad_points_; ++p) {
        for (int i = 0; i < n; ++i) {
            u[i] = U(p, i);
        }
        const std::vector<double> x = quad_point(p);
        problem_.nonlinearity(u, x, g);
        for (int i = 0; i < n; ++i) {
            G(p, i) = g[i];
        }
    }
    Vector F = sign_ * project(G);
    for (int i = 0; i < n; ++i) {
        auto seg = F.segment(i * field_size_, field_size_);
        seg += problem_.diffusion[i] * apply_linear(a.segment(i * field_size_, field_size_));
    }
    return F;
}

Matrix DiscreteSystem::nonlinear_block(const Vector& wd) const
{
    const Matrix& Tx = quad_eval_[0];
    if (problem_.dim == 1) {
        return Tx.transpose() * wd.asDiagonal() * Tx;
    }
    // Sum factorization of (T_y (x) T_x)^T diag(wd) (T_y (x) T_x).
    const Matrix& Ty = quad_eval_[1];
    const Eigen::Index nb = N_ + 1;
    const Eigen::Index M = Tx.rows();
    const Eigen::Map<const Matrix> D(wd.data(), M, M);
    const Matrix C = pair_products(Tx).transpose() * D;   // (k + nb k', n)
    const Matrix E = C * pair_products(Ty);                // (k + nb k', j + nb j')
    Matrix block(nb * nb, nb * nb);
    for (Eigen::Index jp = 0; jp < nb; ++jp) {
        for (Eigen::Index kp = 0; kp < nb; ++kp) {
            for (Eigen::Index j = 0; j < nb; ++j) {
                for (Eigen::Index k = 0; k < nb; ++k) {
                    block(k + nb * j, kp + nb * jp) = E(k + nb * kp, j + nb * jp);
                }
            }
        }
    }
    return block;
}

Matrix DiscreteSystem::jacobian(const Vector& a) const
{
    const Matrix U = nodal_values(a);
    const int n = problem_.n_fields;
    Matrix dG(quad_points_, n * n);
    std::vector<double> u(n), jac(n * n);
    for (Eigen::Index p = 0; p < quad_points_; ++p) {
        for (int i = 0; i < n; ++i) {
            u[i] = U(p, i);
        }
        const std::vector<double> x = quad_point(p);
        problem_.nonlinearity_jac(u, x, jac);
        for (int c = 0; c < n * n; ++c) {
            dG(p, c) = jac[c];
        }
    }
    Matrix J = Matrix::Zero(size(), size());
    for (int i = 0; i < n; ++i) {
        J.block(i * field_size_, i * field_size_, field_size_, field_size_) =
            problem_.diffusion[i] * linear_dense_;
        for (int l = 0; l < n; ++l) {
            const Vector wd = weights_.cwiseProduct(dG.col(i * n + l));
            if (wd.isZero(0.0)) {
                continue;
            }
            J.block(i * field_size_, l * field_size_, field_size_, field_size_) +=
                sign_ * nonlinear_block(wd);
        }
    }
    return J;
}

Vector DiscreteSystem::fit_nodal(const Matrix& nodal) const
{
    if (nodal.rows() != quad_points_ || nodal.cols() != problem_.n_fields) {
        throw DimensionMismatch("nodal data does not match the quadrature grid");
    }
    // Discrete mass matrix T^T W T, tensorized in 2D.
    Matrix Tfull = quad_eval_[0];
    if (problem_.dim == 2) {
        Tfull = kron(quad_eval_[1], quad_eval_[0]);
    }
    const Matrix discrete_mass = Tfull.transpose() * weights_.asDiagonal() * Tfull;
    const auto solver = discrete_mass.completeOrthogonalDecomposition();
    const Vector rhs = project(nodal);
    Vector a(size());
    for (int i = 0; i < problem_.n_fields; ++i) {
        a.segment(i * field_size_, field_size_) = solver.solve(rhs.segment(i * field_size_, field_size_));
    }
    return a;
}

std::vector<std::vector<double>> DiscreteSystem::grid_axes(int resolution) const
{
    if (resolution < 2) {
        throw std::invalid_argument("grid resolution must be >= 2");
    }
    std::vector<std::vector<double>> axes;
    for (const auto& iv : problem_.domain) {
        std::vector<double> axis(resolution);
        for (int m = 0; m < resolution; ++m) {
            axis[m] = iv.lo + iv.length() * m / (resolution - 1);
        }
        axis.back() = iv.hi;
        axes.push_back(std::move(axis));
    }
    return axes;
}

Matrix DiscreteSystem::to_grid(const Vector& a, int resolution) const
{
    if (a.size() != size()) {
        throw DimensionMismatch("coefficient vector does not match the system");
    }
    const auto axes = grid_axes(resolution);
    std::vector<Matrix> V;
    for (int d = 0; d < problem_.dim; ++d) {
        std::vector<double> ref(resolution);
        for (int m = 0; m < resolution; ++m) {
            ref[m] = problem_.domain[d].to_reference(axes[d][m]);
        }
        ref.front() = -1.0;
        ref.back() = 1.0;
        V.push_back(bases_[d].eval_matrix(ref));
    }
    const Eigen::Index nb = N_ + 1;
    const Eigen::Index points = problem_.dim == 1 ? resolution : Eigen::Index(resolution) * resolution;
    Matrix out(points, problem_.n_fields);
    for (int i = 0; i < problem_.n_fields; ++i) {
        const auto block = a.segment(i * field_size_, field_size_);
        if (problem_.dim == 1) {
            out.col(i) = V[0] * block;
        } else {
            const Eigen::Map<const Matrix> X(block.data(), nb, nb);
            const Matrix G = V[0] * X * V[1].transpose();
            out.col(i) = Eigen::Map<const Vector>(G.data(), G.size());
        }
    }
    return out;
}

Vector resize_coefficients(const Vector& a, int n_fields, int dim, int N_from, int N_to)
{
    const Eigen::Index from = N_from + 1;
    const Eigen::Index to = N_to + 1;
    const Eigen::Index fs_from = dim == 1 ? from : from * from;
    const Eigen::Index fs_to = dim == 1 ? to : to * to;
    if (a.size() != n_fields * fs_from) {
        throw DimensionMismatch("coefficient vector does not match N_from");
    }
    const Eigen::Index keep = std::min(from, to);
    Vector out = Vector::Zero(n_fields * fs_to);
    for (int i = 0; i < n_fields; ++i) {
        if (dim == 1) {
            out.segment(i * fs_to, keep) = a.segment(i * fs_from, keep);
        } else {
            for (Eigen::Index j = 0; j < keep; ++j) {
                out.segment(i * fs_to + j * to, keep) = a.segment(i * fs_from + j * from, keep);
            }
        }
    }
    return out;
}

} // namespace multiroot
