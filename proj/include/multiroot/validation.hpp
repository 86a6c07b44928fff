#pragma once

#include <vector>

#include "multiroot/galerkin.hpp"
#include "multiroot/lm_solver.hpp"

namespace multiroot {

/// Central differences, column by column, with h_j = h_scale * (1 + |a_j|).
Matrix fd_jacobian(const NonlinearSystem& system, const Vector& a, double h_scale = 1e-6);

/// ||J - J_ref||_F / ||J_ref||_F, or the absolute norm when J_ref vanishes.
double relative_deviation(const Matrix& J, const Matrix& J_ref);

struct PolishConfig {
    LMConfig lm = [] {
        LMConfig c;
        c.max_iters = 60;
        c.residual_tol = 1e-12;
        return c;
    }();
    // Largest residual accepted as a converged polish.
    double accept_tol = 1e-9;
    // Quadrature oversampling of every system built here.
    int oversample = 1;
};

/// Re-solves `root` (given at degree cap N_from) at N_to, starting from the
/// zero-padded or truncated coefficients. Throws PolishFailed.
Vector polish_at(const ProblemDef& problem, const Vector& root, int N_from, int N_to,
                 const PolishConfig& cfg = {});

/// Per-field sup-norm distance between two coefficient vectors on a uniform grid.
std::vector<double> grid_distance(const DiscreteSystem& lhs, const Vector& a, const DiscreteSystem& rhs,
                                  const Vector& b, int resolution = 1001);

struct ReferenceError {
    std::vector<double> per_field;
    double max() const;
};

/// Error of `root` (a solution at degree cap N) against the polish of that
/// root at N_ref, on a 1001-point grid per direction.
ReferenceError reference_error(const ProblemDef& problem, const Vector& root, int N, int N_ref = 48,
                               const PolishConfig& cfg = {}, int resolution = 1001);

struct TrendPoint {
    int N = 0;
    double error = 0.0; // NaN when the polish at this N failed
};

/// Truncates the reference root to each N, polishes it there and measures the
/// sup-norm error against the reference. `ref` lives at degree cap N_ref.
std::vector<TrendPoint> error_trend(const ProblemDef& problem, const Vector& ref, int N_ref,
                                    const std::vector<int>& Ns, const PolishConfig& cfg = {},
                                    int resolution = 1001);

/// True when every value is finite and each is strictly below its predecessor.
bool strictly_decreasing(const std::vector<TrendPoint>& trend);

} // namespace multiroot
