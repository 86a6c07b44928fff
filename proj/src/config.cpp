#include "multiroot/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "multiroot/errors.hpp"

namespace multiroot {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(int line, const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return x;
    } catch (const std::exception&) {
        throw ParseError(line, key + " expects a number, got '" + v + "'");
    }
}

long long to_integer(int line, const std::string& key, const std::string& v)
{
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ParseError(line, key + " expects an integer, got '" + v + "'");
    }
    return x;
}

int to_int_at_least(int line, const std::string& key, const std::string& v, int lo)
{
    const long long x = to_integer(line, key, v);
    if (x < lo || x > 1'000'000'000) {
        throw ParseError(line, key + " must be an integer >= " + std::to_string(lo) + ", got " + v);
    }
    return static_cast<int>(x);
}

double to_positive(int line, const std::string& key, const std::string& v)
{
    const double x = to_double(line, key, v);
    if (!(x > 0.0)) {
        throw ParseError(line, key + " must be positive, got " + v);
    }
    return x;
}

bool to_bool(int line, const std::string& key, const std::string& v)
{
    const std::string s = lower(v);
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    throw ParseError(line, key + " expects true or false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, int, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"N", [](RunConfig& c, int l, auto& k, auto& v) { c.N = to_int_at_least(l, k, v, 2); }},
        {"oversample", [](RunConfig& c, int l, auto& k, auto& v) { c.oversample = to_int_at_least(l, k, v, 1); }},
        {"bc",
         [](RunConfig& c, int l, auto&, auto& v) {
             const std::string s = lower(v);
             if (s == "dirichlet") c.bc = BoundaryKind::Dirichlet;
             else if (s == "noflux" || s == "no_flux" || s == "neumann") c.bc = BoundaryKind::NoFlux;
             else throw ParseError(l, "bc must be dirichlet or noflux, got '" + v + "'");
         }},
        {"mu0", [](RunConfig& c, int l, auto& k, auto& v) { c.lm.mu0 = to_positive(l, k, v); }},
        {"delta1", [](RunConfig& c, int l, auto& k, auto& v) { c.lm.delta1 = to_double(l, k, v); }},
        {"delta2", [](RunConfig& c, int l, auto& k, auto& v) { c.lm.delta2 = to_double(l, k, v); }},
        {"epsilon", [](RunConfig& c, int l, auto& k, auto& v) { c.lm.epsilon = to_positive(l, k, v); }},
        {"max_iters", [](RunConfig& c, int l, auto& k, auto& v) { c.lm.max_iters = to_int_at_least(l, k, v, 1); }},
        {"mu_max", [](RunConfig& c, int l, auto& k, auto& v) { c.lm.mu_max = to_positive(l, k, v); }},
        {"residual_tol", [](RunConfig& c, int l, auto& k, auto& v) { c.lm.residual_tol = to_double(l, k, v); }},
        {"max_solutions",
         [](RunConfig& c, int l, auto& k, auto& v) { c.search.max_solutions = to_int_at_least(l, k, v, 0); }},
        {"max_attempts",
         [](RunConfig& c, int l, auto& k, auto& v) { c.search.max_attempts = to_int_at_least(l, k, v, 0); }},
        {"consecutive_failures",
         [](RunConfig& c, int l, auto& k, auto& v) { c.search.consecutive_failures = to_int_at_least(l, k, v, 1); }},
        {"perturb_scale", [](RunConfig& c, int l, auto& k, auto& v) { c.search.perturb_scale = to_double(l, k, v); }},
        {"dup_tol", [](RunConfig& c, int l, auto& k, auto& v) { c.search.dup_tol = to_positive(l, k, v); }},
        {"root_tol", [](RunConfig& c, int l, auto& k, auto& v) { c.search.root_tol = to_positive(l, k, v); }},
        {"seed",
         [](RunConfig& c, int l, auto& k, auto& v) {
             c.search.rng_seed = static_cast<std::uint64_t>(to_int_at_least(l, k, v, 0));
         }},
        {"reuse_initial", [](RunConfig& c, int l, auto& k, auto& v) { c.search.reuse_initial = to_bool(l, k, v); }},
        {"restart_from_initial",
         [](RunConfig& c, int l, auto& k, auto& v) { c.search.restart_from_initial = to_bool(l, k, v); }},
        {"direct_seed_solve",
         [](RunConfig& c, int l, auto& k, auto& v) { c.search.direct_seed_solve = to_bool(l, k, v); }},
        {"deflation_exponent",
         [](RunConfig& c, int l, auto& k, auto& v) { c.search.deflation_exponent = to_double(l, k, v); }},
        {"deflation_shift",
         [](RunConfig& c, int l, auto& k, auto& v) { c.search.deflation_shift = to_double(l, k, v); }},
        {"deflation_mode",
         [](RunConfig& c, int l, auto&, auto& v) {
             const std::string s = lower(v);
             if (s == "product") c.search.deflation_mode = DeflationMode::Product;
             else if (s == "single_last_root" || s == "single-last-root")
                 c.search.deflation_mode = DeflationMode::SingleLastRoot;
             else throw ParseError(l, "deflation_mode must be product or single_last_root, got '" + v + "'");
         }},
        {"initial_guess",
         [](RunConfig& c, int l, auto&, auto& v) {
             c.initial_guesses = split_list(v);
             if (c.initial_guesses.empty()) {
                 throw ParseError(l, "initial_guess needs at least one entry");
             }
         }},
        {"output", [](RunConfig& c, int l, auto&, auto& v) {
             if (v.empty()) throw ParseError(l, "output must not be empty");
             c.output_dir = v;
         }},
        {"grid_resolution",
         [](RunConfig& c, int l, auto& k, auto& v) { c.grid_resolution = to_int_at_least(l, k, v, 2); }},
        {"expand_symmetry", [](RunConfig& c, int l, auto& k, auto& v) { c.expand_symmetry = to_bool(l, k, v); }},
        {"jacobian_points",
         [](RunConfig& c, int l, auto& k, auto& v) { c.jacobian_points = to_int_at_least(l, k, v, 1); }},
        {"jacobian_tol", [](RunConfig& c, int l, auto& k, auto& v) { c.jacobian_tol = to_positive(l, k, v); }},
        {"compare_iters",
         [](RunConfig& c, int l, auto& k, auto& v) {
             c.compare_iters.clear();
             for (const auto& item : split_list(v)) {
                 c.compare_iters.push_back(to_int_at_least(l, k, item, 0));
             }
         }},
    };
    return table;
}

std::string format_number(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? "," : "") + items[i];
    }
    return out;
}

} // namespace

std::string to_string(BoundaryKind kind)
{
    return kind == BoundaryKind::Dirichlet ? "dirichlet" : "noflux";
}

std::string to_string(DeflationMode mode)
{
    return mode == DeflationMode::Product ? "product" : "single_last_root";
}

ModelSpec RunConfig::model_spec() const
{
    return make_model(model, params);
}

ProblemDef RunConfig::problem() const
{
    ProblemDef p = model_spec().problem();
    if (bc) {
        p.bc = *bc;
    }
    return p;
}

DiscreteSystem RunConfig::system() const
{
    return DiscreteSystem(problem(), N, oversample);
}

std::vector<Seed> RunConfig::seeds(const DiscreteSystem& sys) const
{
    std::vector<Seed> out;
    for (const auto& name : initial_guesses) {
        if (lower(name) == "all") {
            for (InitialGuess ig : available_initial_guesses(model)) {
                out.push_back({to_string(ig), initial_guess(model, ig, sys)});
            }
        } else if (name.rfind("file:", 0) == 0) {
            const std::string path = name.substr(5);
            std::ifstream in(path);
            if (!in) {
                throw ConfigError("cannot open initial guess file '" + path + "'");
            }
            std::vector<double> values;
            std::string line;
            while (std::getline(in, line)) {
                line = trim(line);
                if (line.empty() || line[0] == '#') {
                    continue;
                }
                // Last comma-separated column holds the value, so coefficient
                // files written by `solve` can be fed back directly.
                const auto pos = line.rfind(',');
                const std::string cell = trim(pos == std::string::npos ? line : line.substr(pos + 1));
                try {
                    values.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    if (!values.empty()) {
                        throw ConfigError("bad value '" + cell + "' in '" + path + "'");
                    }
                }
            }
            if (static_cast<Eigen::Index>(values.size()) != sys.size()) {
                throw ConfigError("initial guess file '" + path + "' has " + std::to_string(values.size()) +
                                  " values, system needs " + std::to_string(sys.size()));
            }
            out.push_back({path, Eigen::Map<Vector>(values.data(), values.size())});
        } else {
            const InitialGuess ig = parse_initial_guess(name);
            out.push_back({to_string(ig), initial_guess(model, ig, sys)});
        }
    }
    return out;
}

std::string RunConfig::to_text() const
{
    std::ostringstream os;
    os << "model = " << to_string(model) << "\n";
    for (const auto& [k, v] : params) {
        os << k << " = " << format_number(v) << "\n";
    }
    os << "N = " << N << "\n";
    os << "oversample = " << oversample << "\n";
    if (bc) {
        os << "bc = " << to_string(*bc) << "\n";
    }
    os << "mu0 = " << format_number(lm.mu0) << "\n";
    os << "delta1 = " << format_number(lm.delta1) << "\n";
    os << "delta2 = " << format_number(lm.delta2) << "\n";
    os << "epsilon = " << format_number(lm.epsilon) << "\n";
    os << "max_iters = " << lm.max_iters << "\n";
    os << "mu_max = " << format_number(lm.mu_max) << "\n";
    os << "residual_tol = " << format_number(lm.residual_tol) << "\n";
    os << "max_solutions = " << search.max_solutions << "\n";
    os << "max_attempts = " << search.max_attempts << "\n";
    os << "consecutive_failures = " << search.consecutive_failures << "\n";
    os << "perturb_scale = " << format_number(search.perturb_scale) << "\n";
    os << "dup_tol = " << format_number(search.dup_tol) << "\n";
    os << "root_tol = " << format_number(search.root_tol) << "\n";
    os << "seed = " << search.rng_seed << "\n";
    os << "reuse_initial = " << (search.reuse_initial ? "true" : "false") << "\n";
    os << "restart_from_initial = " << (search.restart_from_initial ? "true" : "false") << "\n";
    os << "direct_seed_solve = " << (search.direct_seed_solve ? "true" : "false") << "\n";
    os << "deflation_exponent = " << format_number(search.deflation_exponent) << "\n";
    os << "deflation_shift = " << format_number(search.deflation_shift) << "\n";
    os << "deflation_mode = " << to_string(search.deflation_mode) << "\n";
    os << "initial_guess = " << join(initial_guesses) << "\n";
    os << "output = " << output_dir << "\n";
    os << "grid_resolution = " << grid_resolution << "\n";
    os << "expand_symmetry = " << (expand_symmetry ? "true" : "false") << "\n";
    os << "jacobian_points = " << jacobian_points << "\n";
    os << "jacobian_tol = " << format_number(jacobian_tol) << "\n";
    std::vector<std::string> its;
    for (int k : compare_iters) {
        its.push_back(std::to_string(k));
    }
    os << "compare_iters = " << join(its) << "\n";
    return os.str();
}

RunConfig parse_config_text(const std::string& text)
{
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool have_model = false;
    // Model parameters depend on the model, which may come later in the file.
    std::vector<std::tuple<int, std::string, std::string>> pending;
    std::map<std::string, int> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(line_no, "missing key");
        }
        if (value.empty()) {
            throw ParseError(line_no, "missing value for '" + key + "'");
        }
        if (auto [it, fresh] = seen.emplace(key, line_no); !fresh) {
            throw ParseError(line_no, "duplicate key '" + key + "' (first on line " + std::to_string(it->second) + ")");
        }
        if (key == "model") {
            try {
                cfg.model = parse_model_id(value);
            } catch (const std::invalid_argument& e) {
                throw ParseError(line_no, e.what());
            }
            have_model = true;
            continue;
        }
        const auto& table = setters();
        if (const auto it = table.find(key); it != table.end()) {
            it->second(cfg, line_no, key, value);
        } else {
            pending.emplace_back(line_no, key, value);
        }
    }
    if (!have_model) {
        throw MissingRequired("model");
    }
    const ParamMap defaults = default_params(cfg.model);
    for (const auto& [line, key, value] : pending) {
        if (!defaults.contains(key)) {
            throw UnknownKey(line, key);
        }
        cfg.params[key] = to_double(line, key, value);
    }
    try {
        cfg.lm.validate();
        cfg.search.validate();
        cfg.problem();
        if (cfg.oversample > 16) {
            throw std::invalid_argument("oversample must be at most 16");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace multiroot
