#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "multiroot/config.hpp"

namespace multiroot {

struct RunResult {
    SearchResult search;
    SolutionSet solutions; // search roots followed by symmetry images
};

/// Assembles the system and runs the search; no files are touched.
RunResult solve(const RunConfig& cfg);

/// Per-root residuals are re-evaluated from the coefficients. Contains no
/// timings, so equal seeds give byte-identical output.
std::string summary_json(const RunConfig& cfg, const DiscreteSystem& sys, const RunResult& result);

/// One JSON object per attempt.
std::string run_log_jsonl(const RunResult& result);

/// Writes solutions/<k>.coeffs.csv, solutions/<k>.grid.csv, summary.json,
/// run_log.jsonl and trace_<attempt>.csv under cfg.output_dir.
void write_outputs(const RunConfig& cfg, const DiscreteSystem& sys, const RunResult& result);

/// solve + write_outputs; returns the process exit code (0 on success).
int run(const RunConfig& cfg, std::ostream& out);

/// I, II, III, ...
std::string roman(int n);

enum class Method { LM, Newton };

Method parse_method(const std::string& name);
std::string to_string(Method m);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

/// ||F|| after each n_it in `iters` for every (method, preset) pair, plus a
/// wall-time row T. Runs that stop early keep their last value.
Table comparison_table(const RunConfig& cfg, const std::vector<Method>& methods, const std::vector<int>& iters);

struct JacobianReport {
    double base = 0.0;     // max relative deviation, undeflated
    double deflated = 0.0; // max relative deviation, one deflated root
    int points = 0;
    bool pass = false;
};

/// Analytic vs central-difference Jacobians at cfg.jacobian_points random
/// points in [-2, 2]^n (seeded by cfg.search.rng_seed).
JacobianReport check_jacobian(const RunConfig& cfg);

/// Rebuilds the system from the config embedded in a coefficient file and
/// returns its grid CSV.
std::string export_grid(const std::string& coeff_path, int resolution);

} // namespace multiroot
