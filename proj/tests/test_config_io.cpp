#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "multiroot/config.hpp"
#include "multiroot/errors.hpp"
#include "multiroot/io.hpp"

using namespace multiroot;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("multiroot_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int parse_error_line(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("minimal config takes defaults")
{
    const RunConfig c = parse_config_text("model = schnakenberg\n");
    CHECK(c.model == ModelId::Schnakenberg);
    CHECK(c.N == 24);
    CHECK(c.params.empty());
    CHECK(c.lm.delta1 == 0.25);
    CHECK(c.lm.delta2 == 0.75);
    CHECK(c.lm.epsilon == 1e-13);
    CHECK(c.lm.max_iters == 500);
    CHECK(c.search.deflation_exponent == 2.0);
    CHECK(c.search.deflation_shift == 1.0);
    CHECK(c.initial_guesses == std::vector<std::string>{"IG1"});
    CHECK_FALSE(c.bc.has_value());
    CHECK(c.problem().bc == BoundaryKind::NoFlux);
}

TEST_CASE("config keys, comments and model parameters")
{
    const RunConfig c = parse_config_text(R"(
# Gray-Scott with a stronger feed
mu = 0.06          # model parameter before the model line
model = grayscott
N = 16
initial_guess = IG1, IG3
deflation_mode = single_last_root
bc = dirichlet
expand_symmetry = false
compare_iters = 1, 2
)");
    CHECK(c.model == ModelId::GrayScott);
    CHECK(c.params.at("mu") == 0.06);
    CHECK(c.model_spec().params.at("rho") == 0.04);
    CHECK(c.N == 16);
    CHECK(c.initial_guesses == std::vector<std::string>{"IG1", "IG3"});
    CHECK(c.search.deflation_mode == DeflationMode::SingleLastRoot);
    CHECK(c.problem().bc == BoundaryKind::Dirichlet);
    CHECK_FALSE(c.expand_symmetry);
    CHECK(c.compare_iters == std::vector<int>{1, 2});
}

TEST_CASE("config errors")
{
    CHECK(parse_error_line("model = bec\nN = -3\n") == 2);
    CHECK(parse_error_line("model = bec\nN\n") == 2);
    CHECK(parse_error_line("model = bec\nN =\n") == 2);
    CHECK(parse_error_line("model = bec\nN = 8\nN = 9\n") == 3);
    CHECK(parse_error_line("model = bec\nmu0 = abc\n") == 2);
    CHECK(parse_error_line("model = bec\nN = 8.5\n") == 2);
    CHECK(parse_error_line("model = bec\nexpand_symmetry = maybe\n") == 2);
    CHECK(parse_error_line("model = brusselator\n") == 1);
    try {
        parse_config_text("model = bec\n\nfoo = 1\n");
        FAIL("expected UnknownKey");
    } catch (const UnknownKey& e) {
        CHECK(e.key() == "foo");
    }
    // a parameter of another model is unknown here
    CHECK_THROWS_AS(parse_config_text("model = bec\nrho = 1\n"), UnknownKey);
    CHECK_THROWS_AS(parse_config_text("N = 8\n"), MissingRequired);
    CHECK_THROWS_AS(parse_config_text(""), MissingRequired);
    CHECK_THROWS_AS(parse_config_text("model = noncoop_definite\np = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("model = bec\ndelta1 = 0.9\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("config text round-trips")
{
    RunConfig c = parse_config_text("model = noncoop_indefinite\np = 2\nq = 2\nN = 12\nseed = 7\nmu0 = 0.1\n"
                                    "initial_guess = all\nbc = noflux\ndup_tol = 1e-7\n");
    const std::string text = c.to_text();
    const RunConfig back = parse_config_text(text);
    CHECK(back.to_text() == text);
    CHECK(back.params == c.params);
    CHECK(back.search.rng_seed == 7);
    CHECK(back.lm.mu0 == 0.1);
    CHECK(back.search.dup_tol == 1e-7);
    CHECK(back.bc == BoundaryKind::NoFlux);
}

TEST_CASE("initial guess resolution")
{
    RunConfig c = parse_config_text("model = schnakenberg\nN = 4\ninitial_guess = all\n");
    const DiscreteSystem sys = c.system();
    auto seeds = c.seeds(sys);
    REQUIRE(seeds.size() == 3);
    CHECK(seeds[0].id == "IG1");
    CHECK(seeds[2].id == "IG3");
    CHECK(seeds[1].guess == initial_guess(ModelId::Schnakenberg, InitialGuess::IG2, sys));

    const fs::path dir = scratch_dir("guess");
    {
        std::ofstream f(dir / "g.txt");
        for (int i = 0; i < 10; ++i) f << 0.5 * i << "\n";
    }
    c.initial_guesses = {"file:" + (dir / "g.txt").string()};
    seeds = c.seeds(sys);
    REQUIRE(seeds.size() == 1);
    CHECK(seeds[0].guess[9] == 4.5);
    {
        std::ofstream f(dir / "short.txt");
        f << "1\n2\n3\n";
    }
    c.initial_guesses = {"file:" + (dir / "short.txt").string()};
    CHECK_THROWS_AS(c.seeds(sys), ConfigError);
    c.initial_guesses = {"IG3"};
    RunConfig b = parse_config_text("model = bec\nN = 4\ninitial_guess = IG3\n");
    CHECK_THROWS(b.seeds(b.system()));
}

TEST_CASE("number formatting round-trips")
{
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0, 0.0, 5e-324}) {
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("atomic writes")
{
    const fs::path dir = scratch_dir("atomic");
    const fs::path p = dir / "a" / "b" / "out.txt";
    write_file_atomic(p, "first");
    write_file_atomic(p, "second");
    CHECK(read_file(p) == "second");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
    CHECK_THROWS_AS(read_file(dir / "missing"), Error);
}

TEST_CASE("coefficient files round-trip exactly")
{
    const DiscreteSystem sys(schnakenberg(50), 6);
    Vector a(sys.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a[i] = std::sin(1.0 + i) / (1.0 + i * i * i);
    }
    const std::string text = coefficients_csv(sys, a, "model = schnakenberg\nN = 6");
    CHECK(text.rfind("# model = schnakenberg\n# N = 6\nfield,kx,value\n", 0) == 0);
    const CoefficientFile f = parse_coefficients_csv(text);
    CHECK(f.values == a);
    CHECK(f.preamble == "model = schnakenberg\nN = 6\n");

    const DiscreteSystem s2(bec(), 3);
    const std::string t2 = coefficients_csv(s2, Vector::Ones(s2.size()));
    CHECK(t2.rfind("field,kx,ky,value\n0,0,0,1\n1,0,0,1\n", 0) != 0);
    CHECK(t2.rfind("field,kx,ky,value\n0,0,0,1\n0,1,0,1\n", 0) == 0);
    CHECK(parse_coefficients_csv(t2).values.size() == 32);

    CHECK_THROWS_AS(parse_coefficients_csv("0,0,1\n"), ConfigError);
    CHECK_THROWS_AS(parse_coefficients_csv("field,kx,value\n0,0,abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_coefficients_csv("# only a comment\n"), ConfigError);
}

TEST_CASE("grid output")
{
    const DiscreteSystem sys(bec(), 6);
    Vector a(sys.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        a[i] = 1.0 / (1.0 + i);
    }
    const std::string csv = grid_csv(sys, a, 5);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,u,v");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        double x, y, u, v;
        char c;
        std::istringstream ls(line);
        ls >> x >> c >> y >> c >> u >> c >> v;
        // Dirichlet basis vanishes on the boundary
        if (x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0) {
            CHECK(std::abs(u) <= 1e-13);
            CHECK(std::abs(v) <= 1e-13);
        }
    }
    CHECK(rows == 25);

    const DiscreteSystem s1(schnakenberg(50), 4);
    const std::string c1 = grid_csv(s1, Vector::Zero(s1.size()), 3);
    CHECK(c1.rfind("x,u,v\n0,0,0\n0.5,0,0\n1,0,0\n", 0) == 0);
}

TEST_CASE("trace output")
{
    LMTrace t;
    t.records.push_back({});
    const std::string csv = trace_csv(t);
    CHECK(csv.rfind("k,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}
