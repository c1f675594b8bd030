#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "qcbel/geometry.hpp"

using namespace qcbel;

namespace {

// independent estimate of the inside fraction of a circle by angular
// rejection sampling
double mc_inside_fraction(const DomainSpec& spec, cplx z0, double r,
                          int n = 200000) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
    int hits = 0;
    for (int k = 0; k < n; ++k) {
        double a = u(rng);
        if (spec.contains(z0 + r * cplx(std::cos(a), std::sin(a)))) ++hits;
    }
    return double(hits) / n;
}

}  // namespace

TEST_CASE("grid construction and indexing") {
    Grid g = make_grid(-1, 1, -1, 1, 4, 4);
    CHECK(g.nx == 4);
    CHECK(g.dx == doctest::Approx(2.0 / 3));
    CHECK(g.size() == 16);
    CHECK(g.node(0, 0) == cplx(-1, -1));
    CHECK(g.node(3, 3) == cplx(1, 1));
    CHECK(g.cell_area() == doctest::Approx(g.dx * g.dy));
    CHECK(g.contains({0.5, -0.5}));
    CHECK(!g.contains({1.5, 0}));

    CHECK_THROWS_AS(make_grid(1, -1, 0, 1, 16, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 1, 0, 1, 1, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0, 1, 0, 1, 5000, 16), std::invalid_argument);
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(make_grid(0, inf, 0, 1, 16, 16), std::invalid_argument);
}

TEST_CASE("domain membership") {
    DomainSpec disk = DomainSpec::unit_disk();
    CHECK(disk.contains({0.5, 0.5}));
    CHECK(!disk.contains({1.0, 0.0}));
    CHECK(disk.boundary_distance({0.25, 0}) == doctest::Approx(0.75));
    CHECK(disk.inradius() == 1.0);
    CHECK(disk.max_distance({1, 0}) == doctest::Approx(2.0));

    DomainSpec ann = DomainSpec::annulus({0, 0}, 0.25, 1.0);
    CHECK(ann.contains({0.5, 0}));
    CHECK(!ann.contains({0.1, 0}));
    CHECK(!ann.contains({1.2, 0}));
    CHECK(ann.boundary_distance({0.5, 0}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(DomainSpec::annulus({0, 0}, 1.0, 0.25), InvalidDomain);

    DomainSpec sq = DomainSpec::square(1.0);
    CHECK(sq.contains({0.9, -0.9}));
    CHECK(!sq.contains({1.1, 0}));
    CHECK(sq.boundary_distance({0, 0}) == doctest::Approx(1.0));
    CHECK(sq.boundary_length() == doctest::Approx(8.0));

    // bow-tie is rejected
    CHECK_THROWS_AS(
        DomainSpec::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InvalidDomain);
    CHECK_THROWS_AS(DomainSpec::polygon({{0, 0}, {1, 1}}), InvalidDomain);
}

TEST_CASE("boundary parameterization closes and lies on the boundary") {
    for (const DomainSpec& d :
         {DomainSpec::unit_disk(), DomainSpec::square(1.5)}) {
        for (int k = 0; k < 64; ++k) {
            cplx b = d.boundary_point(k / 64.0);
            CHECK(d.boundary_distance(b) == doctest::Approx(0.0).epsilon(1e-9));
        }
        CHECK(std::abs(d.boundary_point(0.0) - d.boundary_point(1.0)) < 1e-12);
    }
}

TEST_CASE("circle fully inside gives the full circle") {
    auto dl = circle_trace(DomainSpec::unit_disk(), {0, 0}, 0.5, 64);
    REQUIRE(dl.arcs.size() == 1);
    CHECK(dl.total_angle() == doctest::Approx(2 * M_PI));
    CHECK(dl.length() == doctest::Approx(M_PI));
}

TEST_CASE("disk-centered-on-boundary arc angle matches the chord formula") {
    // center on the unit circle, radius r: interior angle 2*acos(r/2)
    DomainSpec disk = DomainSpec::unit_disk();
    for (double r : {0.25, 0.5, 1.0}) {
        auto dl = circle_trace(disk, {1, 0}, r, 64);
        double expected = 2 * std::acos(r / 2);
        CHECK(dl.total_angle() == doctest::Approx(expected).epsilon(1e-9));
        // every sampled point is inside (nudged off the endpoints)
        for (const auto& arc : dl.arcs)
            for (cplx p : dl.sample_arc({arc.a0 + 1e-9, arc.a1 - 1e-9}))
                CHECK(disk.contains(p));
    }
}

TEST_CASE("arc angles agree with rejection sampling") {
    DomainSpec ann = DomainSpec::annulus({0, 0}, 0.3, 1.0);
    DomainSpec sq = DomainSpec::square(1.0);
    struct Case {
        const DomainSpec* d;
        cplx z0;
        double r;
    } cases[] = {
        {&ann, {0.5, 0.0}, 0.35},  // clips the inner hole
        {&ann, {0.6, 0.0}, 0.55},  // clips both circles
        {&sq, {0.8, 0.8}, 0.5},    // corner overlap
        {&sq, {0.0, 0.0}, 1.5},    // pokes through all four sides
    };
    for (const auto& c : cases) {
        auto dl = circle_trace(*c.d, c.z0, c.r, 128);
        double frac = mc_inside_fraction(*c.d, c.z0, c.r);
        CHECK(dl.total_angle() / (2 * M_PI) ==
              doctest::Approx(frac).epsilon(0.01));
    }
}

TEST_CASE("empty intersection is empty, not an error") {
    auto dl = circle_trace(DomainSpec::unit_disk(), {5, 0}, 0.5, 64);
    CHECK(dl.empty());
    // circle swallowing the whole disk
    auto dl2 = circle_trace(DomainSpec::unit_disk(), {0, 0}, 3.0, 64);
    CHECK(dl2.empty());
    // circle inside the hole of an annulus
    auto dl3 =
        circle_trace(DomainSpec::annulus({0, 0}, 0.5, 1.0), {0, 0}, 0.2, 64);
    CHECK(dl3.empty());
}

TEST_CASE("dashed-line samples lie on the circle") {
    auto dl = circle_trace(DomainSpec::square(1.0), {0.9, 0}, 0.4, 128);
    REQUIRE(!dl.empty());
    for (const auto& arc : dl.arcs) {
        auto pts = dl.sample_arc(arc);
        REQUIRE(pts.size() >= 2);
        for (cplx p : pts)
            CHECK(std::abs(p - cplx(0.9, 0)) == doctest::Approx(0.4));
    }
}

TEST_CASE("domain mask area converges to the true area") {
    Grid g = make_grid(-1.1, 1.1, -1.1, 1.1, 501, 501);
    auto mask = domain_mask(DomainSpec::unit_disk(), g);
    double covered = 0;
    for (auto m : mask) covered += m;
    CHECK(covered * g.cell_area() == doctest::Approx(M_PI).epsilon(0.01));

    auto mask2 = domain_mask(DomainSpec::square(1.0), g);
    double covered2 = 0;
    for (auto m : mask2) covered2 += m;
    CHECK(covered2 * g.cell_area() == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("angular clipping helper agrees with direct evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 2 * M_PI), ut(-0.95, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
        double psi = u(rng), t = ut(rng);
        bool greater = trial % 2;
        auto arcs = detail::clip_arcs_cos({{0.0, 2 * M_PI}}, psi, t, greater);
        double measure = 0;
        for (const auto& a : arcs) measure += a.measure();
        double expected = greater ? 2 * std::acos(t) : 2 * M_PI - 2 * std::acos(t);
        CHECK(measure == doctest::Approx(expected).epsilon(1e-9));
        for (const auto& a : arcs) {
            double mid = 0.5 * (a.a0 + a.a1);
            bool in = std::cos(mid - psi) > t;
            CHECK(in == greater);
        }
    }
}
