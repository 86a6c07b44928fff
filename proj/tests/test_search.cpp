#include <doctest.h>

#include <cmath>

#include "multiroot/errors.hpp"
#include "multiroot/search.hpp"

using namespace multiroot;

namespace {

// F(x, y) = (x^2 - 1, y^2 - 4): four isolated roots (+-1, +-2).
class FourRoots final : public NonlinearSystem {
public:
    Eigen::Index size() const override { return 2; }
    Vector residual(const Vector& a) const override
    {
        return Vector{{a[0] * a[0] - 1.0, a[1] * a[1] - 4.0}};
    }
    Matrix jacobian(const Vector& a) const override
    {
        return Matrix{{2.0 * a[0], 0.0}, {0.0, 2.0 * a[1]}};
    }
};

// F(a) = M a - b with M invertible.
class Affine final : public NonlinearSystem {
public:
    Eigen::Index size() const override { return 3; }
    Vector residual(const Vector& a) const override { return M() * a - Vector{{1.0, -2.0, 0.5}}; }
    Matrix jacobian(const Vector&) const override { return M(); }

private:
    static Matrix M() { return Matrix{{4, 1, 0}, {1, 3, 1}, {0, 1, 2}}; }
};

SolutionSet set_of(std::initializer_list<Vector> roots)
{
    SolutionSet s;
    for (const auto& r : roots) {
        SolutionRecord rec;
        rec.coefficients = r;
        s.records.push_back(rec);
    }
    return s;
}

} // namespace

TEST_CASE("duplicate test uses the relative distance")
{
    const SolutionSet s = set_of({Vector{{3.0, 4.0}}});
    CHECK(is_duplicate(Vector{{3.0, 4.0}}, s, 1e-6));
    // distance 5e-6, ||r|| = 5: 5e-6 / 6 < 1e-6
    CHECK(is_duplicate(Vector{{3.0, 4.0 + 5e-6}}, s, 1e-6));
    CHECK_FALSE(is_duplicate(Vector{{3.0, 4.0 + 7e-6}}, s, 1e-6));
    CHECK_FALSE(is_duplicate(Vector{{0.0, 0.0}}, SolutionSet{}, 1e-6));
    const SolutionSet z = set_of({Vector{{0.0, 0.0}}});
    CHECK(is_duplicate(Vector{{5e-7, 0.0}}, z, 1e-6));
    CHECK_FALSE(is_duplicate(Vector{{1e-6, 0.0}}, z, 1e-6));
}

TEST_CASE("perturbation is bounded and reproducible")
{
    const Vector root{{2.0, -4.0, 1.0}};
    std::mt19937_64 rng1(9), rng2(9);
    const double bound = 0.5 * (1.0 + 4.0) / (10 + 1);
    for (int t = 0; t < 200; ++t) {
        const Vector p = perturb(root, 0.5, 10, rng1);
        CHECK((p - root).cwiseAbs().maxCoeff() <= bound);
        CHECK(p == perturb(root, 0.5, 10, rng2));
    }
    std::mt19937_64 rng3(9);
    CHECK(perturb(root, 0.0, 10, rng3) == root);
}

TEST_CASE("search configuration validation")
{
    SearchConfig c;
    CHECK_NOTHROW(c.validate());
    c.max_attempts = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SearchConfig{};
    c.dup_tol = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SearchConfig{};
    c.root_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_THROWS_AS(search(FourRoots{}, 1, Vector::Zero(3), SearchConfig{}, LMConfig{}), DimensionMismatch);
}

TEST_CASE("an affine system has exactly one root")
{
    const Affine sys;
    const auto res = search(sys, 2, Vector::Zero(3), SearchConfig{}, LMConfig{});
    REQUIRE(res.solutions.size() == 1);
    CHECK(sys.residual(res.solutions.records[0].coefficients).norm() <= 1e-9);
    CHECK(res.solutions.records[0].discovered_by == Discovery::Direct);
    // the loop stops after consecutive_failures failed restarts
    CHECK(res.log.size() == 1 + static_cast<std::size_t>(SearchConfig{}.consecutive_failures));
}

TEST_CASE("deflation finds all four roots of a separable quadratic")
{
    const FourRoots sys;
    SearchConfig cfg;
    cfg.perturb_scale = 2.0;
    cfg.consecutive_failures = 10;
    const auto res = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{});
    REQUIRE(res.solutions.size() == 4);
    for (std::size_t i = 0; i < res.solutions.size(); ++i) {
        const auto& r = res.solutions.records[i];
        CHECK(sys.residual(r.coefficients).norm() <= cfg.root_tol);
        CHECK(std::abs(std::abs(r.coefficients[0]) - 1.0) < 1e-9);
        CHECK(std::abs(std::abs(r.coefficients[1]) - 2.0) < 1e-9);
        for (std::size_t j = 0; j < i; ++j) {
            CHECK((r.coefficients - res.solutions.records[j].coefficients).norm() > 1.0);
        }
    }
    CHECK(res.solutions.records[0].discovered_by == Discovery::Direct);
    CHECK(res.solutions.records[1].discovered_by == Discovery::Deflated);
}

TEST_CASE("budgets bound the search")
{
    const FourRoots sys;
    SearchConfig cfg;
    cfg.perturb_scale = 2.0;
    cfg.max_solutions = 2;
    auto res = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{});
    CHECK(res.solutions.size() == 2);
    cfg = SearchConfig{};
    cfg.max_attempts = 3;
    res = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{});
    CHECK(res.log.size() <= 3);
    cfg = SearchConfig{};
    cfg.max_solutions = 0;
    res = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{});
    CHECK(res.solutions.empty());
    CHECK(res.log.empty());
}

TEST_CASE("search is deterministic for a fixed seed")
{
    const FourRoots sys;
    SearchConfig cfg;
    cfg.perturb_scale = 2.0;
    const auto a = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{});
    const auto b = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{});
    REQUIRE(a.solutions.size() == b.solutions.size());
    for (std::size_t i = 0; i < a.solutions.size(); ++i) {
        CHECK(a.solutions.records[i].coefficients == b.solutions.records[i].coefficients);
        CHECK(a.solutions.records[i].attempt_index == b.solutions.records[i].attempt_index);
    }
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        CHECK(a.log[i].outcome == b.log[i].outcome);
        CHECK(a.log[i].initial_guess_id == b.log[i].initial_guess_id);
    }
}

TEST_CASE("attempt log is consistent with the solution set")
{
    const FourRoots sys;
    SearchConfig cfg;
    cfg.perturb_scale = 2.0;
    const auto res = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{});
    std::size_t new_roots = 0;
    for (std::size_t i = 0; i < res.log.size(); ++i) {
        const auto& e = res.log[i];
        CHECK(e.attempt == static_cast<int>(i));
        CHECK(e.iterations == e.trace.iterations());
        if (e.outcome == "new_root") {
            ++new_roots;
            CHECK(e.residual <= cfg.root_tol);
        }
    }
    CHECK(new_roots == res.solutions.size());
    CHECK(res.log[0].initial_guess_id == "a0");
    CHECK(res.log[0].deflated_roots == 0);
}

TEST_CASE("multi-seed search carries roots across seeds")
{
    const FourRoots sys;
    SearchConfig cfg;
    cfg.consecutive_failures = 1;
    cfg.perturb_scale = 0.1;
    const std::vector<Seed> seeds{{"A", Vector{{0.9, 1.9}}}, {"B", Vector{{-0.9, -1.9}}}, {"C", Vector{{0.8, 1.8}}}};
    const auto res = search(sys, 1, seeds, cfg, LMConfig{});
    REQUIRE(res.solutions.size() >= 2);
    CHECK(res.solutions.records[0].initial_guess_id == "A");
    CHECK(res.solutions.records[0].coefficients.isApprox(Vector{{1.0, 2.0}}, 1e-12));
    // seed B is solved undeflated first and lands on (-1, -2), new or already known
    const AttemptLog* first_b = nullptr;
    for (const auto& e : res.log) {
        if (e.initial_guess_id == "B") {
            first_b = &e;
            break;
        }
    }
    REQUIRE(first_b != nullptr);
    CHECK((first_b->outcome == "new_root" || first_b->outcome == "duplicate"));
    CHECK(first_b->residual <= 1e-9);
    for (const auto& r : res.solutions.records) {
        if (r.initial_guess_id == "B") {
            CHECK(r.discovered_by == Discovery::Direct);
        }
    }
    CHECK(res.solutions.size() <= 4);
    // seed C converges undeflated to a root that is already known
    bool c_duplicate = false;
    for (const auto& e : res.log) {
        if (e.initial_guess_id == "C" && e.outcome == "duplicate") c_duplicate = true;
    }
    CHECK(c_duplicate);
}

TEST_CASE("single-guess search matches a one-seed multi-seed search")
{
    const FourRoots sys;
    SearchConfig cfg;
    cfg.perturb_scale = 2.0;
    const auto a = search(sys, 1, Vector{{0.3, 0.7}}, cfg, LMConfig{}, "x");
    const auto b = search(sys, 1, std::vector<Seed>{{"x", Vector{{0.3, 0.7}}}}, cfg, LMConfig{});
    REQUIRE(a.solutions.size() == b.solutions.size());
    for (std::size_t i = 0; i < a.solutions.size(); ++i) {
        CHECK(a.solutions.records[i].coefficients == b.solutions.records[i].coefficients);
    }
}

TEST_CASE("symmetry expansion adds verified images")
{
    const auto spec = make_model(ModelId::Schnakenberg);
    const DiscreteSystem sys(spec.problem(), 24);
    const Vector ig = initial_guess(ModelId::Schnakenberg, InitialGuess::IG1, sys);
    SearchConfig cfg;
    const auto res = search(sys, 24, ig, cfg, LMConfig{}, "IG1");
    REQUIRE_FALSE(res.solutions.empty());
    const SolutionSet all = expand_by_symmetry(res.solutions, spec, sys, cfg, LMConfig{});
    CHECK(all.size() >= res.solutions.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& r = all.records[i];
        CHECK(sys.residual(r.coefficients).norm() <= cfg.root_tol);
        if (i >= res.solutions.size()) {
            CHECK(r.discovered_by == Discovery::Symmetry);
        }
        for (std::size_t j = 0; j < i; ++j) {
            const SolutionSet one = set_of({all.records[j].coefficients});
            CHECK_FALSE(is_duplicate(r.coefficients, one, cfg.dup_tol));
        }
    }
}
