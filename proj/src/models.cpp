#include "multiroot/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "multiroot/errors.hpp"

namespace multiroot {

namespace {

double param(const ParamMap& p, const std::string& key)
{
    const auto it = p.find(key);
    if (it == p.end()) {
        throw std::invalid_argument("missing model parameter '" + key + "'");
    }
    return it->second;
}

int exponent_param(const ParamMap& p, const std::string& key)
{
    const double v = param(p, key);
    if (v != 2.0 && v != 3.0) {
        throw UnsupportedExponent(key + " must be 2 or 3, got " + std::to_string(v));
    }
    return static_cast<int>(v);
}

std::vector<Interval> box(int dim, double lo, double hi)
{
    return std::vector<Interval>(dim, Interval{lo, hi});
}

ProblemDef schnakenberg_from(const ParamMap& p)
{
    const double a = param(p, "a"), b = param(p, "b"), c = param(p, "c");
    ProblemDef def;
    def.dim = 1;
    def.n_fields = 2;
    def.diffusion = {param(p, "d1"), param(p, "d2")};
    def.bc = BoundaryKind::NoFlux;
    def.domain = box(1, param(p, "lo"), param(p, "hi"));
    def.nonlinearity = [a, b, c](std::span<const double> w, std::span<const double>, std::span<double> g) {
        const double u = w[0], v = w[1];
        g[0] = c * (u - a - u * u * v);
        g[1] = c * (u * u * v - b);
    };
    def.nonlinearity_jac = [c](std::span<const double> w, std::span<const double>, std::span<double> J) {
        const double u = w[0], v = w[1];
        J[0] = c * (1.0 - 2.0 * u * v);
        J[1] = -c * u * u;
        J[2] = 2.0 * c * u * v;
        J[3] = c * u * u;
    };
    return def;
}

ProblemDef gray_scott_from(const ParamMap& p)
{
    const double rho = param(p, "rho"), mu = param(p, "mu");
    ProblemDef def;
    def.dim = 1;
    def.n_fields = 2;
    def.diffusion = {param(p, "d1"), param(p, "d2")};
    def.bc = BoundaryKind::NoFlux;
    def.domain = box(1, param(p, "lo"), param(p, "hi"));
    def.nonlinearity = [rho, mu](std::span<const double> w, std::span<const double>, std::span<double> g) {
        const double u = w[0], v = w[1];
        g[0] = (mu + rho) * u - v * u * u;
        g[1] = v * u * u - rho * (1.0 - v);
    };
    def.nonlinearity_jac = [rho, mu](std::span<const double> w, std::span<const double>, std::span<double> J) {
        const double u = w[0], v = w[1];
        J[0] = (mu + rho) - 2.0 * u * v;
        J[1] = -u * u;
        J[2] = 2.0 * u * v;
        J[3] = u * u + rho;
    };
    return def;
}

ProblemDef noncoop_from(const ParamMap& p, double v_sign)
{
    const int pe = exponent_param(p, "p"), qe = exponent_param(p, "q");
    const double lambda = param(p, "lambda"), gamma = param(p, "gamma"), delta = param(p, "delta");
    ProblemDef def;
    def.dim = 2;
    def.n_fields = 2;
    def.diffusion = {param(p, "d1"), param(p, "d2")};
    def.bc = BoundaryKind::Dirichlet;
    def.domain = box(2, param(p, "lo"), param(p, "hi"));
    def.nonlinearity = [=](std::span<const double> w, std::span<const double>, std::span<double> g) {
        const double u = w[0], v = w[1];
        g[0] = lambda * u - delta * v + signed_power(u, pe);
        g[1] = delta * u + gamma * v + v_sign * signed_power(v, qe);
    };
    def.nonlinearity_jac = [=](std::span<const double> w, std::span<const double>, std::span<double> J) {
        const double u = w[0], v = w[1];
        J[0] = lambda + signed_power_derivative(u, pe);
        J[1] = -delta;
        J[2] = delta;
        J[3] = gamma + v_sign * signed_power_derivative(v, qe);
    };
    return def;
}

ProblemDef bec_from(const ParamMap& p)
{
    const double eta1 = param(p, "eta1"), eta2 = param(p, "eta2");
    const double mu1 = param(p, "mu1"), mu2 = param(p, "mu2"), beta = param(p, "beta");
    ProblemDef def;
    def.dim = 2;
    def.n_fields = 2;
    def.diffusion = {param(p, "d1"), param(p, "d2")};
    def.bc = BoundaryKind::Dirichlet;
    def.domain = box(2, param(p, "lo"), param(p, "hi"));
    def.nonlinearity = [=](std::span<const double> w, std::span<const double>, std::span<double> g) {
        const double u = w[0], v = w[1];
        g[0] = eta1 * u + mu1 * u * u * u + beta * u * v * v;
        g[1] = eta2 * v + mu2 * v * v * v + beta * u * u * v;
    };
    def.nonlinearity_jac = [=](std::span<const double> w, std::span<const double>, std::span<double> J) {
        const double u = w[0], v = w[1];
        J[0] = eta1 + 3.0 * mu1 * u * u + beta * v * v;
        J[1] = 2.0 * beta * u * v;
        J[2] = 2.0 * beta * u * v;
        J[3] = eta2 + 3.0 * mu2 * v * v + beta * u * u;
    };
    return def;
}

std::vector<Symmetry> declared_symmetries(ModelId id)
{
    switch (id) {
    case ModelId::Schnakenberg:
    case ModelId::GrayScott: return {Symmetry::HalfShift, Symmetry::Reflection};
    case ModelId::NoncoopDefinite:
    case ModelId::NoncoopIndefinite: return {Symmetry::FlipBoth};
    case ModelId::BEC: return {Symmetry::FlipFirst, Symmetry::FlipSecond, Symmetry::FlipBoth};
    }
    return {};
}

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

} // namespace

std::string to_string(ModelId id)
{
    switch (id) {
    case ModelId::Schnakenberg: return "schnakenberg";
    case ModelId::GrayScott: return "grayscott";
    case ModelId::NoncoopDefinite: return "noncoop_definite";
    case ModelId::NoncoopIndefinite: return "noncoop_indefinite";
    case ModelId::BEC: return "bec";
    }
    return "unknown";
}

std::string to_string(Symmetry s)
{
    switch (s) {
    case Symmetry::HalfShift: return "half_shift";
    case Symmetry::Reflection: return "reflection";
    case Symmetry::FlipFirst: return "flip_first";
    case Symmetry::FlipSecond: return "flip_second";
    case Symmetry::FlipBoth: return "flip_both";
    }
    return "unknown";
}

ModelId parse_model_id(const std::string& name)
{
    const std::string s = lowercase(name);
    if (s == "schnakenberg") return ModelId::Schnakenberg;
    if (s == "grayscott" || s == "gray_scott" || s == "gray-scott") return ModelId::GrayScott;
    if (s == "noncoop_definite" || s == "noncoop-definite") return ModelId::NoncoopDefinite;
    if (s == "noncoop_indefinite" || s == "noncoop-indefinite") return ModelId::NoncoopIndefinite;
    if (s == "bec") return ModelId::BEC;
    throw std::invalid_argument("unknown model '" + name + "'");
}

ParamMap default_params(ModelId id)
{
    switch (id) {
    case ModelId::Schnakenberg:
        return {{"d1", 1.0}, {"d2", 50.0}, {"a", 1.0 / 3.0}, {"b", 2.0 / 3.0}, {"c", 200.0},
                {"lo", 0.0}, {"hi", 1.0}};
    case ModelId::GrayScott:
        return {{"d1", 2.5e-4}, {"d2", 5e-4}, {"rho", 0.04}, {"mu", 0.065}, {"lo", 0.0}, {"hi", 1.0}};
    case ModelId::NoncoopDefinite:
        return {{"d1", 1.0}, {"d2", 1.0}, {"p", 3.0}, {"q", 3.0}, {"lambda", -0.5}, {"gamma", -0.5},
                {"delta", 5.0}, {"lo", -1.0}, {"hi", 1.0}};
    case ModelId::NoncoopIndefinite:
        return {{"d1", 1.0}, {"d2", 1.0}, {"p", 3.0}, {"q", 3.0}, {"lambda", -0.5}, {"gamma", -1.0},
                {"delta", 0.5}, {"lo", -3.0}, {"hi", 3.0}};
    case ModelId::BEC:
        return {{"d1", 1.0}, {"d2", 1.0}, {"eta1", -1.0}, {"eta2", -1.0}, {"mu1", 1.0}, {"mu2", 1.0},
                {"beta", -5.0}, {"lo", 0.0}, {"hi", 1.0}};
    }
    return {};
}

ModelSpec make_model(ModelId id, const ParamMap& overrides)
{
    ModelSpec spec{id, default_params(id), declared_symmetries(id)};
    for (const auto& [key, value] : overrides) {
        if (!spec.params.contains(key)) {
            throw std::invalid_argument("model " + to_string(id) + " has no parameter '" + key + "'");
        }
        spec.params[key] = value;
    }
    return spec;
}

ProblemDef ModelSpec::problem() const
{
    for (const auto& [key, value] : params) {
        if (!default_params(id).contains(key)) {
            throw std::invalid_argument("model " + to_string(id) + " has no parameter '" + key + "'");
        }
    }
    switch (id) {
    case ModelId::Schnakenberg: return schnakenberg_from(params);
    case ModelId::GrayScott: return gray_scott_from(params);
    case ModelId::NoncoopDefinite: return noncoop_from(params, -1.0);
    case ModelId::NoncoopIndefinite: return noncoop_from(params, +1.0);
    case ModelId::BEC: return bec_from(params);
    }
    throw std::invalid_argument("unknown model");
}

ProblemDef schnakenberg(double d2)
{
    if (!(d2 > 0.0)) {
        throw std::invalid_argument("d2 must be positive");
    }
    return make_model(ModelId::Schnakenberg, {{"d2", d2}}).problem();
}

ProblemDef gray_scott()
{
    return make_model(ModelId::GrayScott).problem();
}

ProblemDef noncoop_definite(int p)
{
    return make_model(ModelId::NoncoopDefinite, {{"p", p}, {"q", p}}).problem();
}

ProblemDef noncoop_indefinite(int p)
{
    return make_model(ModelId::NoncoopIndefinite, {{"p", p}, {"q", p}}).problem();
}

ProblemDef bec()
{
    return make_model(ModelId::BEC).problem();
}

double signed_power(double u, int p)
{
    const double m = std::abs(u);
    return p == 2 ? u * m : u * m * m;
}

double signed_power_derivative(double u, int p)
{
    const double m = std::abs(u);
    return p == 2 ? 2.0 * m : 3.0 * m * m;
}

Vector apply_symmetry(const ModelSpec& model, Symmetry transform, const DiscreteSystem& sys, const Vector& a)
{
    if (std::find(model.symmetries.begin(), model.symmetries.end(), transform) == model.symmetries.end()) {
        throw UnsupportedTransform(to_string(transform) + " is not a symmetry of " + to_string(model.id));
    }
    if (a.size() != sys.size()) {
        throw DimensionMismatch("coefficient vector does not match the system");
    }
    const Eigen::Index fs = sys.field_size();
    Vector out = a;
    switch (transform) {
    case Symmetry::FlipFirst:
        out.segment(0, fs) *= -1.0;
        return out;
    case Symmetry::FlipSecond:
        out.segment(fs, fs) *= -1.0;
        return out;
    case Symmetry::FlipBoth:
        return -a;
    case Symmetry::Reflection:
        // phi_k(-x) = (-1)^k phi_k(x)
        for (int i = 0; i < sys.n_fields(); ++i) {
            for (Eigen::Index k = 1; k < fs; k += 2) {
                out(i * fs + k) = -out(i * fs + k);
            }
        }
        return out;
    case Symmetry::HalfShift: {
        const Basis1D& basis = sys.bases()[0];
        const Interval& iv = basis.interval();
        std::vector<double> shifted;
        for (Eigen::Index p = 0; p < sys.quad_points(); ++p) {
            const double x = sys.quad_point(p)[0];
            const double s = iv.lo + std::fmod(x - iv.lo + 0.5 * iv.length(), iv.length());
            shifted.push_back(std::clamp(iv.to_reference(s), -1.0, 1.0));
        }
        const Matrix V = basis.eval_matrix(shifted);
        Matrix nodal(sys.quad_points(), sys.n_fields());
        for (int i = 0; i < sys.n_fields(); ++i) {
            nodal.col(i) = V * a.segment(i * fs, fs);
        }
        return sys.fit_nodal(nodal);
    }
    }
    throw UnsupportedTransform("unknown transform");
}

std::string to_string(InitialGuess ig)
{
    switch (ig) {
    case InitialGuess::IG1: return "IG1";
    case InitialGuess::IG2: return "IG2";
    case InitialGuess::IG3: return "IG3";
    }
    return "unknown";
}

InitialGuess parse_initial_guess(const std::string& name)
{
    const std::string s = lowercase(name);
    if (s == "ig1") return InitialGuess::IG1;
    if (s == "ig2") return InitialGuess::IG2;
    if (s == "ig3") return InitialGuess::IG3;
    throw std::invalid_argument("unknown initial guess preset '" + name + "'");
}

std::vector<InitialGuess> available_initial_guesses(ModelId id)
{
    if (id == ModelId::Schnakenberg || id == ModelId::GrayScott) {
        return {InitialGuess::IG1, InitialGuess::IG2, InitialGuess::IG3};
    }
    return {InitialGuess::IG1, InitialGuess::IG2};
}

Vector initial_guess(ModelId id, InitialGuess ig, const DiscreteSystem& sys)
{
    const auto presets = available_initial_guesses(id);
    if (std::find(presets.begin(), presets.end(), ig) == presets.end()) {
        throw std::invalid_argument(to_string(ig) + " is not defined for " + to_string(id));
    }
    double u = 0.0, v = 0.0;
    const double s1 = std::sin(1.0);
    switch (id) {
    case ModelId::Schnakenberg:
    case ModelId::GrayScott:
        if (ig == InitialGuess::IG1) { u = -1.0; v = -1.0; }
        if (ig == InitialGuess::IG2) { u = -s1; v = -1.0; }
        if (ig == InitialGuess::IG3) { u = -s1; v = -s1; } // sin(IG1)
        break;
    case ModelId::NoncoopDefinite:
    case ModelId::NoncoopIndefinite:
        if (ig == InitialGuess::IG1) { u = -1.0; v = -1.0; }
        if (ig == InitialGuess::IG2) { u = -s1; v = -s1; }
        break;
    case ModelId::BEC:
        if (ig == InitialGuess::IG1) { u = 1.0; v = -1.0; }
        if (ig == InitialGuess::IG2) { u = -s1; v = -std::cos(1.0); }
        break;
    }
    const Eigen::Index fs = sys.field_size();
    Vector a(sys.size());
    a.segment(0, fs).setConstant(u);
    a.segment(fs, fs).setConstant(v);
    return a;
}

} // namespace multiroot
