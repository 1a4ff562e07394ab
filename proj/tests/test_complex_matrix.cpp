#include <catch2/catch_amalgamated.hpp>

#include "shadowlab/builtins.hpp"
#include "shadowlab/complex_matrix.hpp"
#include "test_util.hpp"

using namespace shadowlab;
using testutil::max_entry_dev;
using testutil::random_matrix;

TEST_CASE("hermitian_parts splits A into Hermitian components") {
    SECTION("Jordan block gives the two spin matrices halved") {
        ComplexMatrix a(2, {0.0, 1.0, 0.0, 0.0});
        auto [a1, a2] = hermitian_parts(a);
        CHECK(max_entry_dev(a1, 0.5 * cplx(1.0, 0.0) * testutil::pauli_x()) < 1e-15);
        CHECK(max_entry_dev(a2, 0.5 * cplx(1.0, 0.0) * testutil::pauli_y()) < 1e-15);
    }
    SECTION("Hermitian input passes through") {
        RngStream rng(11, 0);
        ComplexMatrix h = testutil::random_hermitian(4, rng);
        auto [a1, a2] = hermitian_parts(h);
        CHECK(max_entry_dev(a1, h) < 1e-15);
        CHECK(hs_norm(a2) < 1e-15);
    }
    SECTION("i times identity is purely anti-Hermitian") {
        ComplexMatrix a = cplx(0.0, 1.0) * ComplexMatrix::identity(3);
        auto [a1, a2] = hermitian_parts(a);
        CHECK(hs_norm(a1) < 1e-15);
        CHECK(max_entry_dev(a2, ComplexMatrix::identity(3)) < 1e-15);
    }
    SECTION("reconstruction A = A1 + i A2 on random matrices") {
        RngStream rng(12, 0);
        for (int rep = 0; rep < 50; ++rep) {
            ComplexMatrix a = random_matrix(2 + rep % 7, rng);
            auto [a1, a2] = hermitian_parts(a);
            CHECK(max_entry_dev(a1 + cplx(0.0, 1.0) * a2, a) < 1e-13);
            CHECK(is_hermitian(a1, 1e-13));
            CHECK(is_hermitian(a2, 1e-13));
        }
    }
}

TEST_CASE("hs_inner is the real Hilbert-Schmidt inner product") {
    CHECK(hs_inner(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == 2.0);
    CHECK(hs_inner(testutil::pauli_x(), testutil::pauli_z()) == 0.0);

    SECTION("polar identity at B = A and Cauchy-Schwarz") {
        RngStream rng(13, 0);
        for (int rep = 0; rep < 50; ++rep) {
            ComplexMatrix a = random_matrix(3, rng);
            ComplexMatrix b = random_matrix(3, rng);
            const double aa = hs_inner(a, a);
            CHECK(hs_inner(a, b) == hs_inner(b, a));
            double tr = 0.0;
            for (const cplx& z : a.data()) tr += std::norm(z);
            CHECK(aa == Catch::Approx(tr).epsilon(1e-13));
            CHECK(hs_inner(a, b) * hs_inner(a, b) <= aa * hs_inner(b, b) * (1.0 + 1e-12));
        }
    }
    SECTION("order mismatch is a dimension error") {
        CHECK_THROWS_AS(hs_inner(ComplexMatrix::identity(2), ComplexMatrix::identity(3)),
                        DimensionError);
    }
}

TEST_CASE("hs_distance") {
    RngStream rng(14, 0);
    ComplexMatrix a = random_matrix(4, rng);
    CHECK(hs_distance(a, a) == 0.0);

    ComplexMatrix d1(2, {1.0, 0.0, 0.0, 0.0});
    ComplexMatrix d2(2, {0.0, 0.0, 0.0, 1.0});
    CHECK(hs_distance(d1, d2) == Catch::Approx(std::sqrt(2.0)).margin(1e-14));

    SECTION("orthogonal pure-state projectors are sqrt(2) apart in any order") {
        for (std::size_t n = 2; n <= 5; ++n) {
            // two orthonormal columns of a unitary give orthogonal projectors
            ComplexMatrix g = random_matrix(n, rng);
            // Gram-Schmidt the first two columns
            std::vector<cplx> u(n), v(n);
            double nu = 0.0;
            for (std::size_t i = 0; i < n; ++i) nu += std::norm(g(i, 0));
            for (std::size_t i = 0; i < n; ++i) u[i] = g(i, 0) / std::sqrt(nu);
            cplx proj = 0.0;
            for (std::size_t i = 0; i < n; ++i) proj += std::conj(u[i]) * g(i, 1);
            double nv = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                v[i] = g(i, 1) - proj * u[i];
                nv += std::norm(v[i]);
            }
            for (std::size_t i = 0; i < n; ++i) v[i] /= std::sqrt(nv);
            ComplexMatrix p(n), q(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    p(i, j) = u[i] * std::conj(u[j]);
                    q(i, j) = v[i] * std::conj(v[j]);
                }
            CHECK(hs_distance(p, q) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
        }
    }
}

TEST_CASE("hs_distance triangle inequality") {
    RngStream rng(15, 0);
    for (int rep = 0; rep < 50; ++rep) {
        ComplexMatrix a = random_matrix(3, rng);
        ComplexMatrix b = random_matrix(3, rng);
        ComplexMatrix c = random_matrix(3, rng);
        CHECK(hs_distance(a, c) <= hs_distance(a, b) + hs_distance(b, c) + 1e-12);
    }
}

TEST_CASE("is_normal") {
    CHECK(is_normal(ComplexMatrix::diagonal({cplx(1.0, 2.0), cplx(-3.0), cplx(0.0, 1.0)})));
    CHECK_FALSE(is_normal(ComplexMatrix(2, {0.0, 1.0, 0.0, 0.0})));
}

TEST_CASE("is_normal on the registry") {
    CHECK(is_normal(shadowlab::builtin_matrix("A3_3")));
    CHECK_FALSE(is_normal(shadowlab::builtin_matrix("A3_2")));
    CHECK(is_normal(shadowlab::builtin_matrix("A4_8")));
}

TEST_CASE("kron") {
    ComplexMatrix a(2, {1.0, 2.0, 3.0, 4.0});
    ComplexMatrix b = ComplexMatrix::identity(2);
    ComplexMatrix k = kron(a, b);
    REQUIRE(k.order() == 4);
    CHECK(k(0, 0) == cplx(1.0));
    CHECK(k(1, 1) == cplx(1.0));
    CHECK(k(0, 2) == cplx(2.0));
    CHECK(k(2, 0) == cplx(3.0));
    CHECK(k(1, 3) == cplx(2.0));
    CHECK(std::abs(k.trace() - a.trace() * b.trace()) < 1e-15);
}

TEST_CASE("expectation and projector") {
    ComplexMatrix a(2, {0.0, 1.0, 0.0, 0.0});
    std::vector<cplx> v = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    CHECK(std::abs(expectation(a, v) - cplx(0.5)) < 1e-15);
}
