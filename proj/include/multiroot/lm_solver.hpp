#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "multiroot/system.hpp"

namespace multiroot {

struct LMConfig {
    double mu0 = 0.01;
    double delta1 = 0.25;
    double delta2 = 0.75;
    double epsilon = 1e-13;
    int max_iters = 500;
    double mu_max = 1e12;
    // Optional early exit once ||F||_2 <= residual_tol (0 disables it).
    double residual_tol = 0.0;

    /// Throws std::invalid_argument unless 0 < delta1 < delta2 < 1, epsilon > 0, mu0 > 0.
    void validate() const;
};

struct LMRecord {
    int k = 0;
    double normF = 0.0;
    double normg = 0.0;
    double mu = 0.0;
    double r = 0.0;
    bool accepted = false;
    double Q = 0.0;
    double elapsed_s = 0.0;
};

/// Per-iteration history; each record describes the iterate a_k before its step.
struct LMTrace {
    std::vector<LMRecord> records;
    double wall_time_s = 0.0;

    /// Residual norm at iteration k (the last record at or before k).
    double normF_at(int k) const;

    /// Index of the last recorded iterate, i.e. the number of steps tried.
    int iterations() const;
};

/// CSV with header `k,normF,normg,mu,r,accepted,Q,elapsed_s`.
void write_trace_csv(std::ostream& os, const LMTrace& trace);

enum class SolveStatus {
    Converged,        // ||g|| < eps and sqrt(Q) < eps
    ResidualReached,  // ||F|| <= residual_tol
    MaxIters,
    MuOverflow,
    NonFinite,
    LinearSolveFailure,
    Diverged,         // Newton baseline only
};

std::string to_string(SolveStatus status);

struct SolveOutcome {
    SolveStatus status = SolveStatus::MaxIters;
    Vector solution;
    LMTrace trace;

    double final_residual() const;
};

/// s = -(J^T J + mu I)^{-1} J^T F via Cholesky, with escalating-mu retries.
Vector lm_step(const Matrix& J, const Vector& F, double mu);

/// Same step from a precomputed normal matrix J^T J and gradient g = J^T F.
Vector lm_step_normal(const Matrix& JtJ, const Vector& g, double mu);

/// Actual-to-predicted reduction ratio; -inf when the predicted decrease is not positive.
double ratio(double Q_old, double Q_new, double model_decrease);

double update_mu(double mu, double r, const LMConfig& config);

/// Trust-region Levenberg-Marquardt on Q(a) = ||F(a)||^2 / 2.
SolveOutcome lm_solve(const NonlinearSystem& system, const Vector& a0, const LMConfig& config = {});

/// Plain Newton a <- a - J^{-1} F (LU), kept as a comparison baseline.
/// Stops with Diverged once ||F|| exceeds 1e30.
SolveOutcome newton_solve(const NonlinearSystem& system, const Vector& a0, int max_iters,
                          double tolerance = 1e-13);

} // namespace multiroot
