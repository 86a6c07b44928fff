#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "multiroot/deflation.hpp"
#include "multiroot/lm_solver.hpp"
#include "multiroot/models.hpp"

namespace multiroot {

struct SearchConfig {
    int max_solutions = 25;
    int max_attempts = 60;
    int consecutive_failures = 5;
    double perturb_scale = 0.5;
    double dup_tol = 1e-6;
    // A candidate is stored only if its undeflated residual is at most this.
    double root_tol = 1e-9;
    std::uint64_t rng_seed = 1;
    bool reuse_initial = false;
    // Include the original guess in the restart rotation after failures.
    bool restart_from_initial = false;
    // Solve each seed once without deflation before deflating it.
    bool direct_seed_solve = true;
    double deflation_exponent = 2.0;
    double deflation_shift = 1.0;
    DeflationMode deflation_mode = DeflationMode::Product;

    void validate() const;
};

enum class Discovery { Direct, Deflated, Symmetry };

std::string to_string(Discovery d);

struct SolutionRecord {
    Vector coefficients;
    double residual_norm = 0.0;
    int iterations = 0;
    int attempt_index = 0;
    std::string initial_guess_id;
    Discovery discovered_by = Discovery::Direct;
};

struct SolutionSet {
    std::vector<SolutionRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
};

/// One line of the run log: what a single solver attempt did.
struct AttemptLog {
    int attempt = 0;
    std::string initial_guess_id;
    int deflated_roots = 0;
    SolveStatus status = SolveStatus::MaxIters;
    int iterations = 0;
    double deflated_residual = 0.0;
    double residual = 0.0;
    std::string outcome; // "new_root", "duplicate", "not_converged", "error"
    LMTrace trace;
};

struct SearchResult {
    SolutionSet solutions;
    std::vector<AttemptLog> log;
};

/// true iff min_i ||candidate - r_i|| / (1 + ||r_i||) < dup_tol.
bool is_duplicate(const Vector& candidate, const SolutionSet& set, double dup_tol);

/// root + U[-sigma, sigma] * (1 + ||root||_inf) / (N + 1), entrywise.
Vector perturb(const Vector& root, double sigma, int N, std::mt19937_64& rng);

struct Seed {
    std::string id;
    Vector guess;
};

/// Solve, store the root, deflate it, restart from a perturbed copy of the
/// latest root; repeat until a budget or the failure counter runs out.
SearchResult search(const NonlinearSystem& system, int N, const Vector& a0, const SearchConfig& cfg,
                    const LMConfig& lmcfg, const std::string& initial_guess_id = "a0");

/// Runs the single-guess loop for each seed in turn. The deflation set and
/// the solution set carry over between seeds; max_attempts and
/// max_solutions bound the whole run, consecutive_failures applies per seed.
SearchResult search(const NonlinearSystem& system, int N, const std::vector<Seed>& seeds, const SearchConfig& cfg,
                    const LMConfig& lmcfg);

/// Maps every root through every declared symmetry, polishes the image with
/// at most `polish_iters` LM iterations and appends new roots.
SolutionSet expand_by_symmetry(const SolutionSet& set, const ModelSpec& model, const DiscreteSystem& sys,
                               const SearchConfig& cfg, const LMConfig& lmcfg, int polish_iters = 5);

} // namespace multiroot
