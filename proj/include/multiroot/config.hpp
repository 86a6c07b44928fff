#pragma once

#include <optional>
#include <string>
#include <vector>

#include "multiroot/models.hpp"
#include "multiroot/search.hpp"

namespace multiroot {

/// Everything a run needs. Built by parse_config from a flat `key = value`
/// file; see README for the key list and defaults.
struct RunConfig {
    ModelId model = ModelId::Schnakenberg;
    ParamMap params;                      // overrides only
    int N = 24;
    int oversample = 1;
    std::optional<BoundaryKind> bc;       // overrides the model's boundary kind
    LMConfig lm;
    SearchConfig search;
    std::vector<std::string> initial_guesses{"IG1"}; // presets, "all", or file:<path>
    std::string output_dir = "out";
    int grid_resolution = 201;
    bool expand_symmetry = true;
    int jacobian_points = 20;
    double jacobian_tol = 1e-6;
    std::vector<int> compare_iters{5, 10, 15, 20, 25};

    ModelSpec model_spec() const;
    ProblemDef problem() const;
    DiscreteSystem system() const;

    /// Resolves the initial-guess list into seeds for `sys`.
    std::vector<Seed> seeds(const DiscreteSystem& sys) const;

    /// The config as `key = value` lines that parse back to an equal config.
    std::string to_text() const;
};

/// Throws ParseError, UnknownKey or MissingRequired; a file that cannot be
/// opened is a ConfigError.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::string to_string(BoundaryKind kind);
std::string to_string(DeflationMode mode);

} // namespace multiroot
