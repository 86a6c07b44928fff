#include "multiroot/lm_solver.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "multiroot/errors.hpp"

namespace multiroot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

void LMConfig::validate() const
{
    if (!(mu0 > 0.0)) {
        throw std::invalid_argument("mu0 must be positive");
    }
    if (!(0.0 < delta1 && delta1 < delta2 && delta2 < 1.0)) {
        throw std::invalid_argument("need 0 < delta1 < delta2 < 1");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (max_iters < 0 || !(mu_max > mu0) || residual_tol < 0.0) {
        throw std::invalid_argument("invalid iteration limits");
    }
}

double LMTrace::normF_at(int k) const
{
    double value = std::numeric_limits<double>::quiet_NaN();
    for (const auto& rec : records) {
        if (rec.k > k) {
            break;
        }
        value = rec.normF;
    }
    return value;
}

int LMTrace::iterations() const
{
    return records.empty() ? 0 : records.back().k;
}

void write_trace_csv(std::ostream& os, const LMTrace& trace)
{
    os << "k,normF,normg,mu,r,accepted,Q,elapsed_s\n";
    os << std::setprecision(17);
    for (const auto& rec : trace.records) {
        os << rec.k << ',' << rec.normF << ',' << rec.normg << ',' << rec.mu << ',' << rec.r << ','
           << (rec.accepted ? 1 : 0) << ',' << rec.Q << ',' << rec.elapsed_s << '\n';
    }
}

std::string to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::ResidualReached: return "residual_reached";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::MuOverflow: return "mu_overflow";
    case SolveStatus::NonFinite: return "non_finite";
    case SolveStatus::LinearSolveFailure: return "linear_solve_failure";
    case SolveStatus::Diverged: return "diverged";
    }
    return "unknown";
}

double SolveOutcome::final_residual() const
{
    if (trace.records.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return trace.records.back().normF;
}

Vector lm_step_normal(const Matrix& JtJ, const Vector& g, double mu)
{
    if (mu < 0.0) {
        throw std::invalid_argument("mu must be non-negative");
    }
    if (JtJ.rows() != g.size() || JtJ.cols() != g.size()) {
        throw DimensionMismatch("normal matrix and gradient are not conformal");
    }
    double shift = mu;
    for (int attempt = 0; attempt <= 5; ++attempt) {
        Matrix shifted = JtJ;
        shifted.diagonal().array() += shift;
        Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() == Eigen::Success) {
            Vector s = -llt.solve(g);
            if (s.allFinite()) {
                return s;
            }
        }
        shift = std::max(shift, 1e-12) * 10.0;
    }
    throw LinearSolveFailure("Cholesky of J^T J + mu I failed after 5 retries");
}

Vector lm_step(const Matrix& J, const Vector& F, double mu)
{
    if (J.rows() != F.size()) {
        throw DimensionMismatch("J and F are not conformal");
    }
    return lm_step_normal(J.transpose() * J, J.transpose() * F, mu);
}

double ratio(double Q_old, double Q_new, double model_decrease)
{
    if (!(model_decrease > 0.0) || !std::isfinite(Q_new)) {
        return -std::numeric_limits<double>::infinity();
    }
    return (Q_old - Q_new) / model_decrease;
}

double update_mu(double mu, double r, const LMConfig& config)
{
    if (r < config.delta1) {
        return 10.0 * mu;
    }
    if (r <= config.delta2) {
        return mu;
    }
    return 0.1 * mu;
}

SolveOutcome lm_solve(const NonlinearSystem& system, const Vector& a0, const LMConfig& config)
{
    config.validate();
    if (a0.size() != system.size()) {
        throw DimensionMismatch("initial guess does not match the system size");
    }
    const auto start = Clock::now();
    SolveOutcome out;
    out.solution = a0;
    if (!a0.allFinite()) {
        out.status = SolveStatus::NonFinite;
        return out;
    }

    Vector& a = out.solution;
    Vector F = system.residual(a);
    double Q = 0.5 * F.squaredNorm();
    double mu = config.mu0;
    Matrix JtJ;
    Vector g;
    bool stale = true;

    auto finish = [&](SolveStatus status) {
        out.status = status;
        out.trace.wall_time_s = seconds_since(start);
        return out;
    };

    for (int k = 0;; ++k) {
        if (!std::isfinite(Q)) {
            return finish(SolveStatus::NonFinite);
        }
        if (stale) {
            const Matrix J = system.jacobian(a);
            g = J.transpose() * F;
            JtJ.setZero(J.cols(), J.cols());
            JtJ.selfadjointView<Eigen::Lower>().rankUpdate(J.transpose());
            JtJ.triangularView<Eigen::StrictlyUpper>() = JtJ.transpose();
            stale = false;
        }
        LMRecord rec;
        rec.k = k;
        rec.normF = std::sqrt(2.0 * Q);
        rec.normg = g.norm();
        rec.mu = mu;
        rec.Q = Q;
        rec.r = std::numeric_limits<double>::quiet_NaN();

        if (rec.normg < config.epsilon && std::sqrt(Q) < config.epsilon) {
            rec.elapsed_s = seconds_since(start);
            out.trace.records.push_back(rec);
            return finish(SolveStatus::Converged);
        }
        if (config.residual_tol > 0.0 && rec.normF <= config.residual_tol) {
            rec.elapsed_s = seconds_since(start);
            out.trace.records.push_back(rec);
            return finish(SolveStatus::ResidualReached);
        }
        if (k >= config.max_iters || mu > config.mu_max) {
            rec.elapsed_s = seconds_since(start);
            out.trace.records.push_back(rec);
            return finish(k >= config.max_iters ? SolveStatus::MaxIters : SolveStatus::MuOverflow);
        }

        Vector s;
        try {
            s = lm_step_normal(JtJ, g, mu);
        } catch (const LinearSolveFailure&) {
            rec.elapsed_s = seconds_since(start);
            out.trace.records.push_back(rec);
            return finish(SolveStatus::LinearSolveFailure);
        }
        const double model_decrease = -g.dot(s) - 0.5 * s.dot(JtJ * s);
        const Vector trial = a + s;
        const Vector F_trial = system.residual(trial);
        const double Q_trial = 0.5 * F_trial.squaredNorm();
        rec.r = ratio(Q, Q_trial, model_decrease);
        rec.accepted = rec.r >= config.delta1;
        rec.elapsed_s = seconds_since(start);
        out.trace.records.push_back(rec);

        mu = update_mu(mu, rec.r, config);
        if (rec.accepted) {
            a = trial;
            F = F_trial;
            Q = Q_trial;
            stale = true;
        }
    }
}

SolveOutcome newton_solve(const NonlinearSystem& system, const Vector& a0, int max_iters, double tolerance)
{
    if (a0.size() != system.size()) {
        throw DimensionMismatch("initial guess does not match the system size");
    }
    const auto start = Clock::now();
    SolveOutcome out;
    out.solution = a0;
    Vector& a = out.solution;
    auto finish = [&](SolveStatus status) {
        out.status = status;
        out.trace.wall_time_s = seconds_since(start);
        return out;
    };

    for (int k = 0;; ++k) {
        const Vector F = system.residual(a);
        LMRecord rec;
        rec.k = k;
        // stableNorm: a finite but huge residual must read as Diverged, not NonFinite
        rec.normF = F.stableNorm();
        rec.Q = 0.5 * rec.normF * rec.normF;
        rec.r = std::numeric_limits<double>::quiet_NaN();
        rec.accepted = true;
        if (!std::isfinite(rec.normF)) {
            rec.elapsed_s = seconds_since(start);
            out.trace.records.push_back(rec);
            return finish(SolveStatus::NonFinite);
        }
        const Matrix J = system.jacobian(a);
        rec.normg = (J.transpose() * F).norm();
        rec.elapsed_s = seconds_since(start);
        out.trace.records.push_back(rec);
        if (rec.normF > 1e30) {
            return finish(SolveStatus::Diverged);
        }
        if (rec.normF < tolerance) {
            return finish(SolveStatus::Converged);
        }
        if (k >= max_iters) {
            return finish(SolveStatus::MaxIters);
        }
        Eigen::PartialPivLU<Matrix> lu(J);
        const Vector step = lu.solve(F);
        if (!(lu.rcond() > 0.0) || !step.allFinite()) {
            return finish(SolveStatus::LinearSolveFailure);
        }
        a -= step;
    }
}

} // namespace multiroot
