#include "multiroot/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "multiroot/errors.hpp"
#include "multiroot/io.hpp"
#include "multiroot/validation.hpp"

namespace multiroot {

using nlohmann::json;

RunResult solve(const RunConfig& cfg)
{
    const ModelSpec spec = cfg.model_spec();
    const DiscreteSystem sys = cfg.system();
    RunResult result;
    result.search = search(sys, cfg.N, cfg.seeds(sys), cfg.search, cfg.lm);
    result.solutions = result.search.solutions;
    if (cfg.expand_symmetry && !spec.symmetries.empty() && !cfg.bc) {
        result.solutions = expand_by_symmetry(result.solutions, spec, sys, cfg.search, cfg.lm);
    }
    return result;
}

std::string roman(int n)
{
    static const std::pair<int, const char*> table[] = {{1000, "M"}, {900, "CM"}, {500, "D"}, {400, "CD"},
                                                        {100, "C"},  {90, "XC"},  {50, "L"},  {40, "XL"},
                                                        {10, "X"},   {9, "IX"},   {5, "V"},   {4, "IV"},
                                                        {1, "I"}};
    if (n <= 0) {
        return std::to_string(n);
    }
    std::string out;
    for (const auto& [value, glyph] : table) {
        while (n >= value) {
            out += glyph;
            n -= value;
        }
    }
    return out;
}

namespace {

json finite_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

std::string coeff_name(std::size_t k)
{
    return "solutions/" + std::to_string(k) + ".coeffs.csv";
}

std::string grid_name(std::size_t k)
{
    return "solutions/" + std::to_string(k) + ".grid.csv";
}

} // namespace

std::string summary_json(const RunConfig& cfg, const DiscreteSystem& sys, const RunResult& result)
{
    const ModelSpec spec = cfg.model_spec();
    json j;
    j["model"] = to_string(cfg.model);
    j["params"] = json(spec.params);
    j["N"] = cfg.N;
    j["dim"] = sys.dim();
    j["n_fields"] = sys.n_fields();
    j["bc"] = to_string(sys.problem().bc);
    j["oversample"] = cfg.oversample;
    j["seed"] = cfg.search.rng_seed;
    j["attempts"] = result.search.log.size();
    json counts = json::object();
    for (const auto& e : result.search.log) {
        counts[e.outcome] = counts.value(e.outcome, 0) + 1;
    }
    j["outcomes"] = counts;
    j["search_roots"] = result.search.solutions.size();
    json sols = json::array();
    for (std::size_t k = 0; k < result.solutions.size(); ++k) {
        const auto& r = result.solutions.records[k];
        const Matrix grid = sys.to_grid(r.coefficients, cfg.grid_resolution);
        json s;
        s["index"] = k;
        s["label"] = roman(static_cast<int>(k) + 1);
        s["residual_norm"] = sys.residual(r.coefficients).norm();
        s["iterations"] = r.iterations;
        s["attempt_index"] = r.attempt_index;
        s["initial_guess"] = r.initial_guess_id;
        s["discovered_by"] = to_string(r.discovered_by);
        std::vector<double> sup;
        for (Eigen::Index i = 0; i < grid.cols(); ++i) {
            sup.push_back(grid.col(i).cwiseAbs().maxCoeff());
        }
        s["max_abs"] = sup;
        s["coefficients"] = coeff_name(k);
        s["grid"] = grid_name(k);
        sols.push_back(s);
    }
    j["solutions"] = sols;
    return j.dump(2) + "\n";
}

std::string run_log_jsonl(const RunResult& result)
{
    std::string out;
    for (const auto& e : result.search.log) {
        json j;
        j["attempt"] = e.attempt;
        j["initial_guess"] = e.initial_guess_id;
        j["deflated_roots"] = e.deflated_roots;
        j["status"] = to_string(e.status);
        j["iterations"] = e.iterations;
        j["deflated_residual"] = finite_or_null(e.deflated_residual);
        j["residual"] = finite_or_null(e.residual);
        j["outcome"] = e.outcome;
        j["wall_time_s"] = e.trace.wall_time_s;
        out += j.dump() + "\n";
    }
    return out;
}

void write_outputs(const RunConfig& cfg, const DiscreteSystem& sys, const RunResult& result)
{
    const std::filesystem::path dir = cfg.output_dir;
    std::filesystem::create_directories(dir / "solutions");
    const std::string preamble = cfg.to_text();
    for (std::size_t k = 0; k < result.solutions.size(); ++k) {
        const Vector& a = result.solutions.records[k].coefficients;
        write_file_atomic(dir / coeff_name(k), coefficients_csv(sys, a, preamble));
        write_file_atomic(dir / grid_name(k), grid_csv(sys, a, cfg.grid_resolution));
    }
    for (const auto& e : result.search.log) {
        write_file_atomic(dir / ("trace_" + std::to_string(e.attempt) + ".csv"), trace_csv(e.trace));
    }
    write_file_atomic(dir / "run_log.jsonl", run_log_jsonl(result));
    write_file_atomic(dir / "summary.json", summary_json(cfg, sys, result));
}

int run(const RunConfig& cfg, std::ostream& out)
{
    const DiscreteSystem sys = cfg.system();
    const RunResult result = solve(cfg);
    write_outputs(cfg, sys, result);
    out << "model " << to_string(cfg.model) << ", N = " << cfg.N << ": " << result.solutions.size()
        << " solutions (" << result.search.solutions.size() << " from search) in " << result.search.log.size()
        << " attempts\n";
    for (std::size_t k = 0; k < result.solutions.size(); ++k) {
        const auto& r = result.solutions.records[k];
        out << "  " << std::setw(5) << std::left << roman(static_cast<int>(k) + 1) << std::right
            << " |F| = " << std::scientific << std::setprecision(2) << sys.residual(r.coefficients).norm()
            << std::defaultfloat << "  " << to_string(r.discovered_by) << "\n";
    }
    out << "wrote " << cfg.output_dir << "\n";
    return 0;
}

Method parse_method(const std::string& name)
{
    if (name == "lm") return Method::LM;
    if (name == "newton") return Method::Newton;
    throw ConfigError("unknown method '" + name + "' (expected lm or newton)");
}

std::string to_string(Method m)
{
    return m == Method::LM ? "lm" : "newton";
}

std::string Table::to_csv() const
{
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os << (i ? "," : "") << cells[i];
        }
        os << "\n";
    };
    line(header);
    for (const auto& r : rows) {
        line(r);
    }
    return os.str();
}

Table comparison_table(const RunConfig& cfg, const std::vector<Method>& methods, const std::vector<int>& iters)
{
    Table t;
    t.header.push_back("n_it");
    const DiscreteSystem sys = cfg.system();
    std::vector<InitialGuess> presets = available_initial_guesses(cfg.model);
    for (Method m : methods) {
        for (InitialGuess ig : presets) {
            t.header.push_back(to_string(m) + ":" + to_string(ig));
        }
    }
    if (iters.empty()) {
        return t;
    }
    int horizon = 0;
    for (int k : iters) {
        horizon = std::max(horizon, k);
    }
    std::vector<SolveOutcome> runs;
    for (Method m : methods) {
        for (InitialGuess ig : presets) {
            const Vector a0 = initial_guess(cfg.model, ig, sys);
            if (m == Method::LM) {
                LMConfig lm = cfg.lm;
                lm.max_iters = horizon;
                runs.push_back(lm_solve(sys, a0, lm));
            } else {
                runs.push_back(newton_solve(sys, a0, horizon));
            }
        }
    }
    auto sci = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2e", x);
        return std::string(buf);
    };
    for (int k : iters) {
        std::vector<std::string> row{std::to_string(k)};
        for (const auto& r : runs) {
            row.push_back(sci(r.trace.normF_at(k)));
        }
        t.rows.push_back(row);
    }
    std::vector<std::string> times{"T"};
    for (const auto& r : runs) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", r.trace.wall_time_s);
        times.push_back(buf);
    }
    t.rows.push_back(times);
    return t;
}

JacobianReport check_jacobian(const RunConfig& cfg)
{
    const DiscreteSystem sys = cfg.system();
    std::mt19937_64 rng(cfg.search.rng_seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    auto random_point = [&] {
        Vector a(sys.size());
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a[i] = U(rng);
        }
        return a;
    };
    JacobianReport rep;
    const DeflatedSystem deflated(sys, DeflationSet({random_point()}, cfg.search.deflation_exponent,
                                                    cfg.search.deflation_shift, cfg.search.deflation_mode));
    for (int p = 0; p < cfg.jacobian_points; ++p) {
        const Vector a = random_point();
        rep.base = std::max(rep.base, relative_deviation(sys.jacobian(a), fd_jacobian(sys, a)));
        rep.deflated = std::max(rep.deflated, relative_deviation(deflated.jacobian(a), fd_jacobian(deflated, a)));
        ++rep.points;
    }
    rep.pass = rep.base <= cfg.jacobian_tol && rep.deflated <= cfg.jacobian_tol;
    return rep;
}

std::string export_grid(const std::string& coeff_path, int resolution)
{
    const CoefficientFile file = parse_coefficients_csv(read_file(coeff_path));
    if (file.preamble.empty()) {
        throw ConfigError("'" + coeff_path + "' carries no configuration preamble");
    }
    const RunConfig cfg = parse_config_text(file.preamble);
    const DiscreteSystem sys = cfg.system();
    if (file.values.size() != sys.size()) {
        throw DimensionMismatch("'" + coeff_path + "' holds " + std::to_string(file.values.size()) +
                                " coefficients, expected " + std::to_string(sys.size()));
    }
    return grid_csv(sys, file.values, resolution);
}

} // namespace multiroot
