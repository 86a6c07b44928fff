#pragma once

#include <filesystem>
#include <string>

#include "multiroot/galerkin.hpp"
#include "multiroot/lm_solver.hpp"

namespace multiroot {

/// Writes to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Shortest form that round-trips through strtod (at most 17 significant digits).
std::string format_double(double x);

/// Modal coefficients, one per row: `field,kx,value` in 1D and
/// `field,kx,ky,value` in 2D, in storage order. `preamble` lines are emitted
/// as `# ` comments before the header.
std::string coefficients_csv(const DiscreteSystem& sys, const Vector& a, const std::string& preamble = "");

struct CoefficientFile {
    Vector values;
    std::string preamble; // comment lines with the leading "# " removed
};

/// Throws ConfigError on malformed rows.
CoefficientFile parse_coefficients_csv(const std::string& text);

/// Field values on a uniform grid: `x,u,v` in 1D, `x,y,u,v` in 2D (x fastest).
/// Two-field systems name the columns u and v, others u1, u2, ...
std::string grid_csv(const DiscreteSystem& sys, const Vector& a, int resolution);

std::string trace_csv(const LMTrace& trace);

} // namespace multiroot
