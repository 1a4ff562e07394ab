#include <catch2/catch_amalgamated.hpp>

#include "shadowlab/builtins.hpp"
#include "shadowlab/normalize.hpp"
#include "shadowlab/range.hpp"
#include "shadowlab/sampling.hpp"
#include "shadowlab/shadow.hpp"
#include "test_util.hpp"

using namespace shadowlab;
using testutil::random_matrix;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("support_point basics") {
    SECTION("diagonal projector") {
        auto [h, p] = support_point(ComplexMatrix::diagonal({0.0, 1.0}), 0.0);
        CHECK(h == Catch::Approx(1.0).margin(1e-12));
        CHECK(std::abs(p - cplx(1.0)) < 1e-12);
    }
    SECTION("Jordan block gives the half disk radius at every angle") {
        ComplexMatrix j(2, {0.0, 1.0, 0.0, 0.0});
        for (double theta : {0.0, 0.7, 2.0, 4.5, 6.1}) {
            auto [h, p] = support_point(j, theta);
            CHECK(h == Catch::Approx(0.5).margin(1e-12));
            CHECK(std::abs(p - 0.5 * std::polar(1.0, theta)) < 1e-11);
        }
    }
    SECTION("diagonal qutrit reaches its eigenvalue radius") {
        auto [h, p] = support_point(builtin_matrix("A3_3"), 0.0);
        CHECK(std::abs(p - cplx(std::sqrt(2.0 / 3.0))) < 1e-12);
    }
}

TEST_CASE("boundary invariants") {
    RngStream rng(51, 0);
    for (int rep = 0; rep < 8; ++rep) {
        ComplexMatrix a = random_matrix(2 + rep % 4, rng);
        RangeBoundary rb = boundary(a, 256);
        const double scale = std::max(1.0, hs_norm(a));

        SECTION("support equation holds at every sample " + std::to_string(rep)) {
            for (std::size_t k = 0; k < rb.angles.size(); ++k) {
                const double proj = rb.points[k].real() * std::cos(rb.angles[k]) +
                                    rb.points[k].imag() * std::sin(rb.angles[k]);
                REQUIRE(std::abs(proj - rb.support_values[k]) < 1e-10 * scale);
            }
        }
        SECTION("sampled points satisfy all support inequalities " + std::to_string(rep)) {
            for (const cplx& p : rb.points) REQUIRE(contains(rb, p, 1e-9 * scale));
        }
    }
}

TEST_CASE("boundary polyline is convex") {
    RngStream rng(57, 0);
    for (int rep = 0; rep < 6; ++rep) {
        ComplexMatrix a = random_matrix(2 + rep % 3, rng);
        RangeBoundary rb = boundary(a, 256);
        // dedupe consecutive repeats, then check the turning direction
        std::vector<cplx> pts;
        for (const cplx& p : rb.points)
            if (pts.empty() || std::abs(p - pts.back()) > 1e-12) pts.push_back(p);
        if (pts.size() > 1 && std::abs(pts.front() - pts.back()) < 1e-12) pts.pop_back();
        const double scale = std::max(1.0, hs_norm(a));
        if (pts.size() < 3) continue;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const cplx u = pts[(k + 1) % pts.size()] - pts[k];
            const cplx v = pts[(k + 2) % pts.size()] - pts[(k + 1) % pts.size()];
            const double cross = u.real() * v.imag() - u.imag() * v.real();
            REQUIRE(cross >= -1e-10 * scale * scale);
        }
    }
}

TEST_CASE("boundary of a normal matrix is the eigenvalue hull") {
    RngStream rng(52, 0);
    std::vector<cplx> lam = {cplx(1.0, 0.0), cplx(-0.5, 1.2), cplx(0.0, -1.0), cplx(-1.0, -0.3)};
    ComplexMatrix u = random_haar_unitary(4, rng);
    ComplexMatrix a = u * ComplexMatrix::diagonal(lam) * u.adjoint();
    RangeBoundary rb = boundary(a, 512);
    for (std::size_t k = 0; k < rb.angles.size(); ++k) {
        double want = -1e30;
        for (const cplx& l : lam)
            want = std::max(want, l.real() * std::cos(rb.angles[k]) +
                                      l.imag() * std::sin(rb.angles[k]));
        CHECK(rb.support_values[k] == Catch::Approx(want).margin(1e-10));
    }
}

TEST_CASE("flat part counts reproduce the qutrit range classes") {
    const std::vector<std::pair<std::string, std::size_t>> classes = {
        {"A3_0", 0}, {"A3_1", 1}, {"A3_2", 2}, {"A3_3", 3}};
    for (const auto& [name, want] : classes) {
        RangeBoundary rb = boundary(builtin_matrix(name), 2048);
        CHECK(flat_parts(rb, 1e-8).size() == want);
    }
}

TEST_CASE("flat part counts of the order-4 survey are resolution-stable") {
    // hulls of point/ellipse/segment combinations: 0,1,2,2,3,3,4,4,4 flats
    const std::size_t want[9] = {0, 1, 2, 2, 3, 3, 4, 4, 4};
    for (int i = 0; i <= 8; ++i) {
        const std::string name = "A4_" + std::to_string(i) + "n";
        CHECK(flat_parts(boundary(builtin_matrix(name), 2048), 1e-8).size() == want[i]);
    }
}

TEST_CASE("contains") {
    ComplexMatrix a = builtin_matrix("A3_0");
    RangeBoundary rb = boundary(a, 256);

    SECTION("barycenter is inside") {
        CHECK(contains(rb, a.trace() / 3.0, 1e-9));
    }
    SECTION("far point is outside") {
        CHECK_FALSE(contains(rb, cplx(rb.support_values[0] + 1.0, 0.0), 1e-9));
    }
    SECTION("sampled expectations are inside") {
        RngStream rng(53, 0);
        for (int k = 0; k < 10000; ++k) {
            PureState psi = random_pure_state(3, rng);
            REQUIRE(contains(rb, expectation(a, psi.amplitudes), 1e-8));
        }
    }
}

TEST_CASE("ellipse_2x2") {
    SECTION("Jordan block is the disk of radius 1/2") {
        EllipseParams e = ellipse_2x2(ComplexMatrix(2, {0.0, 1.0, 0.0, 0.0}));
        CHECK(std::abs(e.focus1) < 1e-12);
        CHECK(std::abs(e.focus2) < 1e-12);
        CHECK(e.minor_axis == Catch::Approx(1.0).margin(1e-12));
        CHECK(e.major_axis == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("normal matrix degenerates to the eigenvalue segment") {
        ComplexMatrix a = ComplexMatrix::diagonal({cplx(1.0, 1.0), cplx(-2.0, 0.0)});
        EllipseParams e = ellipse_2x2(a);
        CHECK(e.minor_axis < 1e-7);
        CHECK(e.major_axis == Catch::Approx(std::abs(e.focus1 - e.focus2)).margin(1e-7));
    }
    SECTION("qubit example has full major axis sqrt(2)") {
        EllipseParams e = ellipse_2x2(builtin_matrix("A2_0"));
        CHECK(e.major_axis == Catch::Approx(std::sqrt(2.0)).margin(1e-10));
        CHECK(e.minor_axis == Catch::Approx(std::sqrt(2.0 / 5.0)).margin(1e-10));
        CHECK(std::abs(e.focus1 + std::sqrt(2.0 / 5.0)) < 1e-10);
        CHECK(std::abs(e.focus2 - std::sqrt(2.0 / 5.0)) < 1e-10);
    }
    SECTION("wrong order rejected") {
        CHECK_THROWS_AS(ellipse_2x2(ComplexMatrix::identity(3)), DimensionError);
    }
}

TEST_CASE("order-2 boundary matches the ellipse closed form at matched angles") {
    RngStream rng(54, 0);
    std::vector<ComplexMatrix> cases;
    cases.push_back(builtin_matrix("A2_0"));
    for (int rep = 0; rep < 20; ++rep) cases.push_back(random_matrix(2, rng));
    for (const ComplexMatrix& a : cases) {
        EllipseParams e = ellipse_2x2(a);
        if (e.minor_axis < 1e-6) continue;  // degenerate: handled separately
        RangeBoundary rb = boundary(a, 1024);
        double worst = 0.0;
        for (std::size_t k = 0; k < rb.angles.size(); ++k)
            worst = std::max(worst,
                             std::abs(rb.points[k] - ellipse_support_point(e, rb.angles[k])));
        CHECK(worst < 1e-8 * std::max(1.0, hs_norm(a)));
    }
}

TEST_CASE("boundary covariance under scaling and translation") {
    RngStream rng(55, 0);
    ComplexMatrix a = random_matrix(3, rng);
    const double s = 2.75;
    const cplx c(0.4, -1.1);
    ComplexMatrix b = cplx(s, 0.0) * a + c * ComplexMatrix::identity(3);
    RangeBoundary rba = boundary(a, 128);
    RangeBoundary rbb = boundary(b, 128);
    for (std::size_t k = 0; k < rba.angles.size(); ++k) {
        CHECK(std::abs(rbb.points[k] - (s * rba.points[k] + c)) < 1e-10);
        const double shift = c.real() * std::cos(rba.angles[k]) + c.imag() * std::sin(rba.angles[k]);
        CHECK(rbb.support_values[k] ==
              Catch::Approx(s * rba.support_values[k] + shift).margin(1e-10));
    }
}

TEST_CASE("rescaled ranges fit inside the out-sphere disk") {
    RngStream rng(56, 0);
    std::vector<ComplexMatrix> cases;
    for (const std::string& name : {"A2_0", "A3_0", "A3_3", "A4_0n", "A4_8n"})
        cases.push_back(builtin_matrix(name));
    for (int rep = 0; rep < 10; ++rep) cases.push_back(natural_rescale(random_matrix(3, rng)));
    for (const ComplexMatrix& a : cases) {
        const double rn = out_sphere_radius(a.order());
        RangeBoundary rb = boundary(natural_rescale(a), 256);
        for (const cplx& p : rb.points) REQUIRE(std::abs(p) <= rn + 1e-9);
    }
}

TEST_CASE("segment_support identifies degenerate ranges") {
    SECTION("real diagonal") {
        auto seg = segment_support(ComplexMatrix::diagonal({0.0, 1.0}));
        REQUIRE(seg.has_value());
        CHECK(std::abs(seg->first - cplx(0.0)) < 1e-12);
        CHECK(std::abs(seg->second - cplx(1.0)) < 1e-12);
    }
    SECTION("collinear complex diagonal") {
        auto seg = segment_support(
            ComplexMatrix::diagonal({cplx(0.0, 0.0), cplx(1.0, 1.0), cplx(2.0, 2.0)}));
        REQUIRE(seg.has_value());
        CHECK(std::abs(seg->second - seg->first - cplx(2.0, 2.0)) < 1e-10);
    }
    SECTION("scalar matrix is a point") {
        auto seg = segment_support(cplx(0.5, 0.5) * ComplexMatrix::identity(2));
        REQUIRE(seg.has_value());
        CHECK(std::abs(seg->first - seg->second) < 1e-12);
    }
    SECTION("non-collinear or non-normal matrices are not segments") {
        CHECK_FALSE(segment_support(builtin_matrix("A3_3")).has_value());
        CHECK_FALSE(segment_support(ComplexMatrix(2, {0.0, 1.0, 0.0, 0.0})).has_value());
    }
    SECTION("hermitian matrices always degenerate") {
        CHECK(segment_support(builtin_matrix("H21")).has_value());
    }
}

TEST_CASE("resolution floor") {
    CHECK_THROWS_AS(boundary(ComplexMatrix::identity(2), 4), DimensionError);
}
