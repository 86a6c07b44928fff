#include "multiroot/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "multiroot/errors.hpp"

namespace multiroot {

Matrix fd_jacobian(const NonlinearSystem& system, const Vector& a, double h_scale)
{
    if (a.size() != system.size()) {
        throw DimensionMismatch("point does not match the system size");
    }
    if (!a.allFinite()) {
        throw std::invalid_argument("fd_jacobian needs a finite point");
    }
    const Eigen::Index n = a.size();
    Matrix J(system.residual(a).size(), n);
    Vector x = a;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = h_scale * (1.0 + std::abs(a[j]));
        x[j] = a[j] + h;
        const Vector fp = system.residual(x);
        x[j] = a[j] - h;
        const Vector fm = system.residual(x);
        x[j] = a[j];
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    return J;
}

double relative_deviation(const Matrix& J, const Matrix& J_ref)
{
    if (J.rows() != J_ref.rows() || J.cols() != J_ref.cols()) {
        throw DimensionMismatch("matrices differ in shape");
    }
    const double ref = J_ref.norm();
    const double diff = (J - J_ref).norm();
    return ref > 0.0 ? diff / ref : diff;
}

Vector polish_at(const ProblemDef& problem, const Vector& root, int N_from, int N_to, const PolishConfig& cfg)
{
    const DiscreteSystem target(problem, N_to, cfg.oversample);
    const Vector start = resize_coefficients(root, problem.n_fields, problem.dim, N_from, N_to);
    const SolveOutcome out = lm_solve(target, start, cfg.lm);
    const double res = target.residual(out.solution).norm();
    if (!(res <= cfg.accept_tol)) {
        throw PolishFailed("polish at N=" + std::to_string(N_to) + " stopped at residual " + std::to_string(res));
    }
    return out.solution;
}

std::vector<double> grid_distance(const DiscreteSystem& lhs, const Vector& a, const DiscreteSystem& rhs,
                                  const Vector& b, int resolution)
{
    if (lhs.n_fields() != rhs.n_fields() || lhs.dim() != rhs.dim()) {
        throw DimensionMismatch("systems discretize different problems");
    }
    const Matrix ga = lhs.to_grid(a, resolution);
    const Matrix gb = rhs.to_grid(b, resolution);
    std::vector<double> out(lhs.n_fields());
    for (int i = 0; i < lhs.n_fields(); ++i) {
        out[i] = (ga.col(i) - gb.col(i)).cwiseAbs().maxCoeff();
    }
    return out;
}

double ReferenceError::max() const
{
    double m = 0.0;
    for (double e : per_field) {
        m = std::max(m, e);
    }
    return m;
}

ReferenceError reference_error(const ProblemDef& problem, const Vector& root, int N, int N_ref,
                               const PolishConfig& cfg, int resolution)
{
    if (N_ref < N) {
        throw InvalidDegree("reference degree must not be below the solution degree");
    }
    const DiscreteSystem coarse(problem, N, cfg.oversample);
    if (root.size() != coarse.size()) {
        throw DimensionMismatch("root does not match degree cap N");
    }
    if (N_ref == N) {
        return {std::vector<double>(problem.n_fields, 0.0)};
    }
    const DiscreteSystem fine(problem, N_ref, cfg.oversample);
    const Vector ref = polish_at(problem, root, N, N_ref, cfg);
    return {grid_distance(coarse, root, fine, ref, resolution)};
}

std::vector<TrendPoint> error_trend(const ProblemDef& problem, const Vector& ref, int N_ref,
                                    const std::vector<int>& Ns, const PolishConfig& cfg, int resolution)
{
    const DiscreteSystem fine(problem, N_ref, cfg.oversample);
    if (ref.size() != fine.size()) {
        throw DimensionMismatch("reference root does not match N_ref");
    }
    // Walk down from N_ref so each polish starts from the nearest finer root.
    std::vector<int> order(Ns);
    std::sort(order.begin(), order.end(), std::greater<>());
    std::map<int, double> errors;
    Vector from = ref;
    int N_from = N_ref;
    for (int N : order) {
        double err = std::numeric_limits<double>::quiet_NaN();
        try {
            const DiscreteSystem coarse(problem, N, cfg.oversample);
            const Vector root = polish_at(problem, from, N_from, N, cfg);
            const auto d = grid_distance(coarse, root, fine, ref, resolution);
            err = *std::max_element(d.begin(), d.end());
            from = root;
            N_from = N;
        } catch (const PolishFailed&) {
        }
        errors[N] = err;
    }
    std::vector<TrendPoint> out;
    for (int N : Ns) {
        out.push_back({N, errors[N]});
    }
    return out;
}

bool strictly_decreasing(const std::vector<TrendPoint>& trend)
{
    for (std::size_t i = 0; i < trend.size(); ++i) {
        if (!std::isfinite(trend[i].error)) {
            return false;
        }
        if (i > 0 && !(trend[i].error < trend[i - 1].error)) {
            return false;
        }
    }
    return true;
}

} // namespace multiroot
