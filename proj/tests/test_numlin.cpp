#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "platelab/errors.hpp"
#include "platelab/numlin.hpp"

using namespace platelab;
using numlin::EigenPair;
using numlin::SymMatrix;

namespace {

SymMatrix random_symmetric(int n, std::uint64_t seed) {
    auto vals = oracles::random_uniform(static_cast<std::size_t>(n) * (n + 1) / 2, -1.0, 1.0, seed);
    SymMatrix A(n);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            A.set(i, j, vals[idx++]);
    return A;
}

double residual_norm(const SymMatrix& A, const EigenPair& p) {
    const int n = A.order();
    std::vector<double> y(n);
    A.apply(p.vector, y);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - p.value * p.vector[i];
        s += r * r;
    }
    return std::sqrt(s);
}

} // namespace

TEST_CASE("diagonal matrix returns sorted diagonal") {
    SymMatrix A(3);
    A.set(0, 0, 3.0);
    A.set(1, 1, 1.0);
    A.set(2, 2, 2.0);
    auto pairs = numlin::eigen_symmetric(A, 3);
    CHECK(pairs[0].value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pairs[1].value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(pairs[2].value == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("2x2 off-diagonal gives -1, +1") {
    SymMatrix A(2);
    A.set(0, 1, 1.0);
    auto pairs = numlin::eigen_symmetric(A, 2);
    CHECK(pairs[0].value == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(pairs[1].value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random 50x50 matches inertia-bisection oracle to 1e-9 relative") {
    SymMatrix A = random_symmetric(50, 20240501u);
    auto pairs = numlin::eigen_symmetric(A, 50);
    auto oracle = oracles::inertia_bisection_eigenvalues(A, 1e-12);
    REQUIRE(oracle.size() == 50);
    double scale = 0.0;
    for (double v : oracle)
        scale = std::max(scale, std::abs(v));
    for (int i = 0; i < 50; ++i)
        CHECK(std::abs(pairs[i].value - oracle[i]) <= 1e-9 * scale);
}

TEST_CASE("residuals, ordering, orthogonality, Rayleigh quotients") {
    SymMatrix A = random_symmetric(40, 77u);
    auto pairs = numlin::eigen_symmetric(A, 40);
    const double bound = 1e-8 * A.max_abs() * A.order();
    for (int i = 0; i < 40; ++i) {
        CHECK(residual_norm(A, pairs[i]) <= bound);
        if (i > 0)
            CHECK(pairs[i].value >= pairs[i - 1].value);
        double nrm = 0.0;
        for (double x : pairs[i].vector)
            nrm += x * x;
        CHECK(std::abs(std::sqrt(nrm) - 1.0) <= 1e-12);
        // Rayleigh quotient reproduces the eigenvalue
        std::vector<double> y(40);
        A.apply(pairs[i].vector, y);
        double rq = 0.0;
        for (int k = 0; k < 40; ++k)
            rq += y[k] * pairs[i].vector[k];
        CHECK(std::abs(rq - pairs[i].value) <= 1e-10 * std::max(1.0, std::abs(pairs[i].value)));
    }
    for (int i = 0; i < 40; ++i)
        for (int j = i + 1; j < 40; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 40; ++k)
                dot += pairs[i].vector[k] * pairs[j].vector[k];
            CHECK(std::abs(dot) <= 1e-10);
        }
}

TEST_CASE("similarity invariance under plane-rotation orthogonal conjugation") {
    const int n = 24;
    SymMatrix A = random_symmetric(n, 5u);
    auto q = oracles::random_orthogonal(n, 99u);
    // B = Q^T A Q
    std::vector<double> t(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += A(i, k) * q[static_cast<std::size_t>(k) * n + j];
            t[static_cast<std::size_t>(i) * n + j] = s;
        }
    SymMatrix B(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += q[static_cast<std::size_t>(k) * n + i] * t[static_cast<std::size_t>(k) * n + j];
            B.set(i, j, s);
        }
    auto pa = numlin::eigen_symmetric(A, n);
    auto pb = numlin::eigen_symmetric(B, n);
    double scale = std::max(std::abs(pa.front().value), std::abs(pa.back().value));
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(pa[i].value - pb[i].value) <= 1e-9 * scale);
}

TEST_CASE("determinism: same input, same bits") {
    SymMatrix A = random_symmetric(30, 4242u);
    auto p1 = numlin::eigen_symmetric(A, 30);
    auto p2 = numlin::eigen_symmetric(A, 30);
    for (int i = 0; i < 30; ++i) {
        CHECK(p1[i].value == p2[i].value);
        CHECK(p1[i].vector == p2[i].vector);
    }
}

TEST_CASE("non-finite entry rejected") {
    SymMatrix A(3);
    A.set(1, 0, std::nan(""));
    CHECK_THROWS_AS(numlin::eigen_symmetric(A, 1), input_error);
}

TEST_CASE("generalized: identity pencil gives all ones") {
    SymMatrix K(4);
    std::vector<double> m{0.5, 2.0, 1.25, 3.0};
    for (int i = 0; i < 4; ++i)
        K.set(i, i, m[i]);
    auto pairs = numlin::eigen_generalized_diag_mass(K, m, 4);
    for (auto& p : pairs)
        CHECK(p.value == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("generalized: diagonal ratios") {
    SymMatrix K(2);
    K.set(0, 0, 8.0);
    K.set(1, 1, 27.0);
    std::vector<double> m{2.0, 3.0};
    auto pairs = numlin::eigen_generalized_diag_mass(K, m, 2);
    CHECK(pairs[0].value == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(pairs[1].value == doctest::Approx(9.0).epsilon(1e-13));

    SymMatrix K2(2);
    K2.set(0, 0, 4.0);
    K2.set(1, 1, 9.0);
    std::vector<double> ones{1.0, 1.0};
    auto p2 = numlin::eigen_generalized_diag_mass(K2, ones, 2);
    CHECK(p2[0].value == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(p2[1].value == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("generalized: vectors are M-orthonormal, values nondecreasing") {
    const int n = 25;
    SymMatrix K = random_symmetric(n, 31u);
    // make it positive-ish definite so values behave; shift by a multiple of M
    auto mv = oracles::random_uniform(n, 0.5, 2.0, 32u);
    for (int i = 0; i < n; ++i)
        K.add(i, i, 30.0 * mv[i]);
    auto pairs = numlin::eigen_generalized_diag_mass(K, mv, n);
    for (int i = 0; i < n; ++i) {
        if (i > 0)
            CHECK(pairs[i].value >= pairs[i - 1].value);
        for (int j = i; j < n; ++j) {
            double dot = 0.0;
            for (int k = 0; k < n; ++k)
                dot += pairs[i].vector[k] * mv[k] * pairs[j].vector[k];
            if (i == j)
                CHECK(std::abs(dot - 1.0) <= 1e-10);
            else
                CHECK(std::abs(dot) <= 1e-10);
        }
    }
}

TEST_CASE("generalized: nonpositive mass rejected") {
    SymMatrix K(2);
    K.set(0, 0, 1.0);
    K.set(1, 1, 1.0);
    std::vector<double> m{1.0, 0.0};
    CHECK_THROWS_AS(numlin::eigen_generalized_diag_mass(K, m, 1), input_error);
}
