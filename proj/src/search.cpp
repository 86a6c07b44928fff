#include "multiroot/search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "multiroot/errors.hpp"

namespace multiroot {

void SearchConfig::validate() const
{
    if (max_solutions < 0 || max_attempts < 0 || consecutive_failures < 1) {
        throw std::invalid_argument("search budgets must be non-negative");
    }
    if (!(perturb_scale > 0.0) || !(dup_tol > 0.0) || !(dup_tol < perturb_scale)) {
        throw std::invalid_argument("need 0 < dup_tol < perturb_scale");
    }
    if (!(root_tol > 0.0)) {
        throw std::invalid_argument("root_tol must be positive");
    }
}

std::string to_string(Discovery d)
{
    switch (d) {
    case Discovery::Direct: return "direct";
    case Discovery::Deflated: return "deflated";
    case Discovery::Symmetry: return "symmetry";
    }
    return "unknown";
}

bool is_duplicate(const Vector& candidate, const SolutionSet& set, double dup_tol)
{
    for (const auto& rec : set.records) {
        const double rel = (candidate - rec.coefficients).norm() / (1.0 + rec.coefficients.norm());
        if (rel < dup_tol) {
            return true;
        }
    }
    return false;
}

Vector perturb(const Vector& root, double sigma, int N, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double amplitude = sigma * (1.0 + root.lpNorm<Eigen::Infinity>()) / (N + 1);
    Vector out = root;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out(i) += amplitude * unit(rng);
    }
    return out;
}

namespace {

// Single-seed loop that appends to `result` and updates `deflation`.
void run_seed(const NonlinearSystem& system, int N, const Seed& seed, const SearchConfig& cfg,
              const LMConfig& lmcfg, std::mt19937_64& rng, DeflationSet& deflation, SearchResult& result)
{
    if (seed.guess.size() != system.size() || !seed.guess.allFinite()) {
        throw DimensionMismatch("initial guess must be finite and match the system size");
    }
    // Roots found from this seed; restarts only rotate through these.
    std::vector<std::size_t> own;
    Vector guess = seed.guess;
    std::string guess_id = seed.id;
    int failures = 0;
    bool first = true;
    while (static_cast<int>(result.log.size()) < cfg.max_attempts &&
           static_cast<int>(result.solutions.size()) < cfg.max_solutions && failures < cfg.consecutive_failures) {
        AttemptLog entry;
        entry.attempt = static_cast<int>(result.log.size());
        entry.initial_guess_id = guess_id;
        entry.deflated_roots = static_cast<int>(deflation.roots().size());
        try {
            // A fresh seed is first solved undeflated; it may reach a root the
            // deflated landscape hides from it.
            const bool direct = first && cfg.direct_seed_solve;
            const DeflationSet none({}, cfg.deflation_exponent, cfg.deflation_shift, cfg.deflation_mode);
            const DeflatedSystem deflated(system, direct ? none : deflation);
            SolveOutcome out = lm_solve(deflated, guess, lmcfg);
            entry.status = out.status;
            entry.iterations = out.trace.iterations();
            entry.deflated_residual = out.final_residual();
            // Always judge the candidate on the undeflated residual.
            entry.residual = system.residual(out.solution).norm();
            entry.trace = std::move(out.trace);
            if (!(entry.residual <= cfg.root_tol)) {
                entry.outcome = "not_converged";
            } else if (is_duplicate(out.solution, result.solutions, cfg.dup_tol)) {
                entry.outcome = "duplicate";
            } else {
                entry.outcome = "new_root";
                SolutionRecord rec;
                rec.coefficients = out.solution;
                rec.residual_norm = entry.residual;
                rec.iterations = entry.iterations;
                rec.attempt_index = entry.attempt;
                rec.initial_guess_id = guess_id;
                rec.discovered_by = (deflation.empty() || direct) ? Discovery::Direct : Discovery::Deflated;
                own.push_back(result.solutions.size());
                result.solutions.records.push_back(std::move(rec));
                deflation = deflation.with_root(out.solution);
            }
        } catch (const Error&) {
            entry.outcome = "error";
            entry.deflated_residual = std::numeric_limits<double>::quiet_NaN();
            entry.residual = std::numeric_limits<double>::quiet_NaN();
        }
        first = false;
        failures = entry.outcome == "new_root" ? 0 : failures + 1;
        result.log.push_back(std::move(entry));

        if (cfg.reuse_initial) {
            guess = seed.guess;
            guess_id = seed.id;
            continue;
        }
        // After f consecutive failures, restart from the f-th most recent root
        // of this seed; the seed itself closes the cycle when requested.
        const std::size_t m = own.size();
        const std::size_t cycle = m + ((cfg.restart_from_initial || m == 0) ? 1 : 0);
        const std::size_t slot = static_cast<std::size_t>(failures) % cycle;
        if (slot == m) {
            guess = perturb(seed.guess, cfg.perturb_scale, N, rng);
            guess_id = "perturbed:" + seed.id;
        } else {
            const std::size_t base = own[m - 1 - slot];
            guess = perturb(result.solutions.records[base].coefficients, cfg.perturb_scale, N, rng);
            guess_id = "perturbed:root" + std::to_string(base);
        }
    }
}

} // namespace

SearchResult search(const NonlinearSystem& system, int N, const std::vector<Seed>& seeds, const SearchConfig& cfg,
                    const LMConfig& lmcfg)
{
    cfg.validate();
    lmcfg.validate();
    SearchResult result;
    std::mt19937_64 rng(cfg.rng_seed);
    DeflationSet deflation({}, cfg.deflation_exponent, cfg.deflation_shift, cfg.deflation_mode);
    for (const Seed& seed : seeds) {
        run_seed(system, N, seed, cfg, lmcfg, rng, deflation, result);
    }
    return result;
}

SearchResult search(const NonlinearSystem& system, int N, const Vector& a0, const SearchConfig& cfg,
                    const LMConfig& lmcfg, const std::string& initial_guess_id)
{
    return search(system, N, std::vector<Seed>{{initial_guess_id, a0}}, cfg, lmcfg);
}

SolutionSet expand_by_symmetry(const SolutionSet& set, const ModelSpec& model, const DiscreteSystem& sys,
                               const SearchConfig& cfg, const LMConfig& lmcfg, int polish_iters)
{
    SolutionSet out = set;
    LMConfig polish = lmcfg;
    polish.max_iters = polish_iters;
    polish.residual_tol = std::min(cfg.root_tol, 1e-11);
    // Images start next to a root; a large mu0 would spend the budget shrinking mu.
    polish.mu0 = std::min(lmcfg.mu0, 1e-8);
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (Symmetry s : model.symmetries) {
            const Vector image = apply_symmetry(model, s, sys, set.records[i].coefficients);
            if (is_duplicate(image, out, cfg.dup_tol)) {
                continue;
            }
            const SolveOutcome polished = lm_solve(sys, image, polish);
            const double res = sys.residual(polished.solution).norm();
            if (!(res <= cfg.root_tol) || is_duplicate(polished.solution, out, cfg.dup_tol)) {
                continue;
            }
            SolutionRecord rec;
            rec.coefficients = polished.solution;
            rec.residual_norm = res;
            rec.iterations = polished.trace.iterations();
            rec.attempt_index = set.records[i].attempt_index;
            rec.initial_guess_id = to_string(s) + ":root" + std::to_string(i);
            rec.discovered_by = Discovery::Symmetry;
            out.records.push_back(std::move(rec));
        }
    }
    return out;
}

} // namespace multiroot
