#include <doctest.h>

#include <cmath>
#include <random>

#include "multiroot/errors.hpp"
#include "multiroot/legendre.hpp"

using namespace multiroot;

TEST_CASE("eval_legendre matches closed forms")
{
    CHECK(eval_legendre(0, 0.3) == 1.0);
    CHECK(eval_legendre(5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_legendre(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
    for (double x : {-1.0, -0.7, 0.0, 0.2, 0.93}) {
        const double l5 = (63 * std::pow(x, 5) - 70 * std::pow(x, 3) + 15 * x) / 8;
        CHECK(eval_legendre(5, x) == doctest::Approx(l5).epsilon(1e-14));
        const double d5 = (315 * std::pow(x, 4) - 210 * x * x + 15) / 8;
        CHECK(eval_legendre_with_derivative(5, x).second == doctest::Approx(d5).epsilon(1e-13));
    }
    // L_k(-1) = (-1)^k, L'_k(1) = k(k+1)/2
    for (int k = 0; k < 30; ++k) {
        CHECK(eval_legendre(k, -1.0) == doctest::Approx(k % 2 ? -1.0 : 1.0));
        CHECK(eval_legendre_with_derivative(k, 1.0).second == doctest::Approx(k * (k + 1) / 2.0));
    }
}

TEST_CASE("lgl_rule small cases")
{
    const auto r2 = lgl_rule(2);
    REQUIRE(r2.nodes.size() == 3);
    CHECK(r2.nodes[0] == -1.0);
    CHECK(std::abs(r2.nodes[1]) < 1e-15);
    CHECK(r2.nodes[2] == 1.0);
    CHECK(r2.weights[0] == doctest::Approx(1.0 / 3));
    CHECK(r2.weights[1] == doctest::Approx(4.0 / 3));
    CHECK(r2.weights[2] == doctest::Approx(1.0 / 3));

    // N=4: {0, +-sqrt(3/7), +-1}, weights {32/45, 49/90, 1/10}
    const auto r4 = lgl_rule(4);
    CHECK(r4.nodes[1] == doctest::Approx(-std::sqrt(3.0 / 7)).epsilon(1e-15));
    CHECK(r4.nodes[3] == doctest::Approx(std::sqrt(3.0 / 7)).epsilon(1e-15));
    CHECK(r4.weights[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r4.weights[1] == doctest::Approx(49.0 / 90).epsilon(1e-15));
    CHECK(r4.weights[2] == doctest::Approx(32.0 / 45).epsilon(1e-15));

    CHECK_THROWS_AS(lgl_rule(1), InvalidDegree);
    CHECK_THROWS_AS(lgl_rule(-3), InvalidDegree);
}

TEST_CASE("lgl_rule invariants over N")
{
    for (int N : {2, 3, 8, 16, 24, 48, 64}) {
        CAPTURE(N);
        const auto r = lgl_rule(N);
        REQUIRE(r.nodes.size() == static_cast<std::size_t>(N + 1));
        CHECK(r.nodes.front() == -1.0);
        CHECK(r.nodes.back() == 1.0);
        double sum = 0.0;
        for (int m = 0; m <= N; ++m) {
            sum += r.weights[m];
            CHECK(r.weights[m] > 0.0);
            if (m > 0) {
                CHECK(r.nodes[m] > r.nodes[m - 1]);
            }
            if (m > 0 && m < N) {
                CHECK(std::abs(eval_legendre_with_derivative(N, r.nodes[m]).second) < 1e-10 * N * N);
            }
        }
        CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
        // exact for monomials up to degree 2N-1
        for (int d = 0; d <= 2 * N - 1; ++d) {
            double q = 0.0;
            for (int m = 0; m <= N; ++m) {
                q += r.weights[m] * std::pow(r.nodes[m], d);
            }
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            CHECK(std::abs(q - exact) <= 1e-12);
        }
    }
    const auto r8 = lgl_rule(8);
    double q = 0.0;
    for (int m = 0; m <= 8; ++m) {
        q += r8.weights[m] * std::pow(r8.nodes[m], 14);
    }
    CHECK(q == doctest::Approx(2.0 / 15).epsilon(1e-14));
}

TEST_CASE("Interval maps")
{
    const Interval I{0.0, 1.0};
    CHECK(I.to_physical(-1.0) == 0.0);
    CHECK(I.to_physical(1.0) == 1.0);
    CHECK(I.to_reference(0.25) == doctest::Approx(-0.5));
    const Interval J{-3.0, 3.0};
    CHECK(J.to_reference(J.to_physical(0.37)) == doctest::Approx(0.37));
}

TEST_CASE("basis boundary conditions")
{
    for (int N : {2, 8, 24}) {
        const Basis1D d = make_basis(BoundaryKind::Dirichlet, N);
        const Basis1D n = make_basis(BoundaryKind::NoFlux, N);
        for (int k = 0; k <= N; ++k) {
            CHECK(std::abs(d.value(k, 1.0)) < 1e-12);
            CHECK(std::abs(d.value(k, -1.0)) < 1e-12);
            CHECK(std::abs(n.derivative(k, 1.0)) < 1e-12 * (1 + k * k));
            CHECK(std::abs(n.derivative(k, -1.0)) < 1e-12 * (1 + k * k));
        }
    }
    const Basis1D n = make_basis(BoundaryKind::NoFlux, 6);
    for (double x : {-1.0, -0.3, 0.5, 1.0}) {
        CHECK(n.value(0, x) == doctest::Approx(1.0));
    }
    CHECK(n.tail_coefficient(0) == 0.0);
    // one-sided second-order difference of phi_3 at the ends
    const double h = 1e-6;
    const double dl = (-3 * n.value(3, -1.0) + 4 * n.value(3, -1.0 + h) - n.value(3, -1.0 + 2 * h)) / (2 * h);
    const double dr = (3 * n.value(3, 1.0) - 4 * n.value(3, 1.0 - h) + n.value(3, 1.0 - 2 * h)) / (2 * h);
    CHECK(std::abs(dl) < 1e-6);
    CHECK(std::abs(dr) < 1e-6);
    CHECK(std::abs(n.derivative(3, 1.0)) <= 1e-12);
    CHECK(std::abs(n.derivative(3, -1.0)) <= 1e-12);

    const Basis1D d = make_basis(BoundaryKind::Dirichlet, 6);
    CHECK(d.value(2, 0.4) == doctest::Approx(eval_legendre(2, 0.4) - eval_legendre(4, 0.4)));
    CHECK(n.value(2, 0.4) == doctest::Approx(eval_legendre(2, 0.4) - 6.0 / 20.0 * eval_legendre(4, 0.4)));
}

TEST_CASE("make_basis errors")
{
    CHECK_THROWS_AS(make_basis(BoundaryKind::Dirichlet, 1), InvalidDegree);
    CHECK_THROWS_AS(make_basis(BoundaryKind::NoFlux, 0), InvalidDegree);
    CHECK_THROWS_AS(make_basis(BoundaryKind::Dirichlet, 4, Interval{1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_basis(BoundaryKind::Dirichlet, 4, Interval{1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("eval_matrix reproduces the basis")
{
    const Basis1D b = make_basis(BoundaryKind::NoFlux, 10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vector c(11);
    for (auto& x : c) x = U(rng);
    const Matrix T = b.eval_matrix(b.nodes());
    for (int m = 0; m <= 10; ++m) {
        double direct = 0.0;
        for (int k = 0; k <= 10; ++k) {
            direct += c[k] * (eval_legendre(k, b.nodes()[m]) + b.tail_coefficient(k) * eval_legendre(k + 2, b.nodes()[m]));
        }
        CHECK((T * c)[m] == doctest::Approx(direct).epsilon(1e-13));
    }
}

TEST_CASE("Dirichlet operators on the reference interval")
{
    const int N = 12;
    const auto ops = operators_1d(make_basis(BoundaryKind::Dirichlet, N, Interval{-1.0, 1.0}));
    for (int k = 0; k <= N; ++k) {
        for (int j = 0; j <= N; ++j) {
            const double a = k == j ? 4.0 * k + 6.0 : 0.0;
            CHECK(ops.stiffness(k, j) == doctest::Approx(a).epsilon(1e-12).scale(1.0));
            double bkj = 0.0;
            if (k == j) bkj = 2.0 / (2 * k + 1) + 2.0 / (2 * k + 5);
            if (j == k + 2) bkj = -2.0 / (2 * k + 5);
            if (k == j + 2) bkj = -2.0 / (2 * j + 5);
            CHECK(ops.mass(k, j) == doctest::Approx(bkj).epsilon(1e-12).scale(1.0));
        }
    }
    CHECK(ops.stiffness == ops.stiffness.transpose());
    CHECK(ops.mass == ops.mass.transpose());
    const Eigen::LLT<Matrix> llt(ops.mass);
    CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("physical scaling of the 1D operators")
{
    const int N = 8;
    const auto ref = operators_1d(make_basis(BoundaryKind::Dirichlet, N, Interval{-1.0, 1.0}));
    const auto unit = operators_1d(make_basis(BoundaryKind::Dirichlet, N, Interval{0.0, 1.0}));
    const auto wide = operators_1d(make_basis(BoundaryKind::NoFlux, N, Interval{-3.0, 3.0}));
    const auto wide_ref = operators_1d(make_basis(BoundaryKind::NoFlux, N, Interval{-1.0, 1.0}));
    CHECK((unit.stiffness - 2.0 * ref.stiffness).norm() < 1e-11);
    CHECK((unit.mass - 0.5 * ref.mass).norm() < 1e-13);
    CHECK((wide.stiffness - wide_ref.stiffness / 3.0).norm() < 1e-11);
    CHECK((wide.mass - 3.0 * wide_ref.mass).norm() < 1e-11);
}

TEST_CASE("NoFlux operators: PSD stiffness with constant null vector")
{
    const auto ops = operators_1d(make_basis(BoundaryKind::NoFlux, 10, Interval{0.0, 1.0}));
    CHECK(ops.stiffness.col(0).norm() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(ops.stiffness);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(ops.mass).eigenvalues().minCoeff() > 0.0);
    // exact quadrature: B_00 = length of the interval
    CHECK(ops.mass(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}
