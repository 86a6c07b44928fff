#pragma once

#include <map>
#include <string>
#include <vector>

#include "multiroot/galerkin.hpp"

namespace multiroot {

enum class ModelId { Schnakenberg, GrayScott, NoncoopDefinite, NoncoopIndefinite, BEC };

enum class Symmetry {
    HalfShift,   // u(x) -> u((x + L/2) mod L), 1D
    Reflection,  // u(x) -> u(lo + hi - x), 1D
    FlipFirst,   // (u, v) -> (-u, v)
    FlipSecond,  // (u, v) -> (u, -v)
    FlipBoth,    // (u, v) -> (-u, -v)
};

using ParamMap = std::map<std::string, double>;

std::string to_string(ModelId id);
std::string to_string(Symmetry s);

/// Accepts the canonical names plus a few aliases (e.g. "grayscott", "gray-scott").
ModelId parse_model_id(const std::string& name);

/// Benchmark problem: identity, parameters and the solution symmetries it admits.
struct ModelSpec {
    ModelId id;
    ParamMap params;
    std::vector<Symmetry> symmetries;

    /// Throws std::invalid_argument for unknown parameter names and
    /// UnsupportedExponent for p, q outside {2, 3}.
    ProblemDef problem() const;
};

ParamMap default_params(ModelId id);

/// Builds a ModelSpec with defaults, then applies overrides (unknown names throw).
ModelSpec make_model(ModelId id, const ParamMap& overrides = {});

ProblemDef schnakenberg(double d2);
ProblemDef gray_scott();
ProblemDef noncoop_definite(int p = 3);
ProblemDef noncoop_indefinite(int p = 3);
ProblemDef bec();

/// sign(u) |u|^p and its derivative p |u|^{p-1}.
double signed_power(double u, int p);
double signed_power_derivative(double u, int p);

/// Maps the coefficients of a root to those of its symmetric image.
/// Throws UnsupportedTransform if the model does not declare `transform`.
Vector apply_symmetry(const ModelSpec& model, Symmetry transform, const DiscreteSystem& sys, const Vector& a);

enum class InitialGuess { IG1, IG2, IG3 };

std::string to_string(InitialGuess ig);
InitialGuess parse_initial_guess(const std::string& name);

/// Presets the model defines (IG3 exists only for the 1D models).
std::vector<InitialGuess> available_initial_guesses(ModelId id);

/// Constant coefficient-space presets: the stated value is written into every
/// modal coefficient of each field block.
Vector initial_guess(ModelId id, InitialGuess ig, const DiscreteSystem& sys);

} // namespace multiroot
