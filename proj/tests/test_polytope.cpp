#include "doctest.h"

#include "cahcbf/polytope.hpp"
#include "cahcbf/rng.hpp"
#include "oracles.hpp"

using namespace cahcbf;

namespace {

std::vector<HalfSpace> unit_box_rows() {
    return {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 1.0}};
}

bool vertex_sets_match(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol) {
    if (a.size() != b.size()) {
        return false;
    }
    for (const Vec2& p : a) {
        double best = 1e18;
        for (const Vec2& q : b) {
            best = std::min(best, norm(p - q));
        }
        if (best > tol) {
            return false;
        }
    }
    return true;
}

double polygon_signed_area(const std::vector<Vec2>& v) {
    double area = 0.0;
    for (size_t k = 0; k < v.size(); ++k) {
        area += cross(v[k], v[(k + 1) % v.size()]);
    }
    return 0.5 * area;
}

}  // namespace

TEST_CASE("unit box has four CCW vertices") {
    const Polytope2 p = Polytope2::from_halfspaces(unit_box_rows());
    REQUIRE(p.vertices().size() == 4);
    CHECK(polygon_signed_area(p.vertices()) > 0.0);
    CHECK(vertex_sets_match(p.vertices(), {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, 1e-12));
    // canonical start: lexicographically smallest vertex
    CHECK(p.vertices()[0].x == doctest::Approx(-1.0));
    CHECK(p.vertices()[0].y == doctest::Approx(-1.0));
}

TEST_CASE("diamond |x|+|y| <= 1") {
    const double s = std::sqrt(0.5);
    const Polytope2 p = Polytope2::from_halfspaces(
        {{{s, s}, s}, {{-s, s}, s}, {{s, -s}, s}, {{-s, -s}, s}});
    REQUIRE(p.vertices().size() == 4);
    CHECK(vertex_sets_match(p.vertices(), {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, 1e-12));
}

TEST_CASE("empty and unbounded intersections are rejected") {
    CHECK_THROWS_AS(Polytope2::from_halfspaces({{{1, 0}, -1.0}, {{-1, 0}, -1.0}}),
                    std::domain_error);
    CHECK_THROWS_AS(Polytope2::from_halfspaces({{{1, 0}, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(Polytope2::from_halfspaces({{{1, 0}, 1.0}, {{0, 1}, 1.0}}), std::domain_error);
}

TEST_CASE("redundant half-spaces are dropped") {
    auto rows = unit_box_rows();
    rows.push_back({{1.0, 0.0}, 5.0});  // slack duplicate direction
    rows.push_back({{0.6, 0.8}, 9.0});  // far away
    const Polytope2 p = Polytope2::from_halfspaces(rows);
    CHECK(p.halfspaces().size() == 4);
    CHECK(p.vertices().size() == 4);
}

TEST_CASE("random polytopes match the pairwise-intersection oracle") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<HalfSpace> rows = {{{1.0, 0.0}, 3.0},
                                       {{-1.0, 0.0}, 3.0},
                                       {{0.0, 1.0}, 3.0},
                                       {{0.0, -1.0}, 3.0}};
        for (int k = 0; k < 5; ++k) {
            const double theta = rng.uniform(0.0, 6.283185307179586);
            rows.push_back({{std::cos(theta), std::sin(theta)}, rng.uniform(0.3, 2.0)});
        }
        const Polytope2 p = Polytope2::from_halfspaces(rows);
        const std::vector<Vec2> expect = oracle::pairwise_vertices(rows);
        CHECK(vertex_sets_match(p.vertices(), expect, 1e-6));
        CHECK(polygon_signed_area(p.vertices()) > 0.0);
        for (const Vec2& v : p.vertices()) {
            for (const HalfSpace& hs : p.halfspaces()) {
                CHECK(dot(hs.n, v) <= hs.c + 1e-9);
            }
        }
    }
}

TEST_CASE("round trip through from_vertices preserves the region") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<HalfSpace> rows = {{{1.0, 0.0}, rng.uniform(0.5, 3.0)},
                                       {{-1.0, 0.0}, rng.uniform(0.5, 3.0)},
                                       {{0.0, 1.0}, rng.uniform(0.5, 3.0)},
                                       {{0.0, -1.0}, rng.uniform(0.5, 3.0)}};
        for (int k = 0; k < 3; ++k) {
            const double theta = rng.uniform(0.0, 6.283185307179586);
            rows.push_back({{std::cos(theta), std::sin(theta)}, rng.uniform(0.4, 2.0)});
        }
        const Polytope2 p = Polytope2::from_halfspaces(rows);
        const Polytope2 q = Polytope2::from_vertices(p.vertices());
        CHECK(vertex_sets_match(p.vertices(), q.vertices(), 1e-9));
    }
}

TEST_CASE("projection onto the region") {
    const Polytope2 box = Polytope2::box(1.0, 1.0);
    SUBCASE("interior point is unchanged") {
        const Vec2 u{0.3, -0.4};
        const Vec2 r = box.project(u);
        CHECK(r.x == u.x);
        CHECK(r.y == u.y);
    }
    SUBCASE("face projection") {
        const Vec2 r = box.project({2.0, 0.5});
        CHECK(r.x == doctest::Approx(1.0));
        CHECK(r.y == doctest::Approx(0.5));
    }
    SUBCASE("corner projection") {
        const Vec2 r = box.project({3.0, 4.0});
        CHECK(r.x == doctest::Approx(1.0));
        CHECK(r.y == doctest::Approx(1.0));
    }
    SUBCASE("matches the grid nearest-point oracle") {
        SplitMix64 rng(11);
        const double res = 1e-3;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<HalfSpace> rows = {{{1.0, 0.0}, 2.0},
                                           {{-1.0, 0.0}, 2.0},
                                           {{0.0, 1.0}, 2.0},
                                           {{0.0, -1.0}, 2.0}};
            for (int k = 0; k < 3; ++k) {
                const double theta = rng.uniform(0.0, 6.283185307179586);
                rows.push_back({{std::cos(theta), std::sin(theta)}, rng.uniform(0.4, 1.5)});
            }
            const Polytope2 p = Polytope2::from_halfspaces(rows);
            const Vec2 target{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
            const Vec2 proj = p.project(target);
            const auto grid = oracle::grid_nearest(rows, target, -2.0, 2.0, res, 0.75 * res);
            REQUIRE(grid.has_value());
            // no lattice point beats the exact projection, and the lattice
            // gets within two cells of it
            CHECK(norm(proj - target) <= norm(*grid - target) + 2.0 * res * std::sqrt(2.0));
            CHECK(norm(*grid - target) <= norm(proj - target) + 2.0 * res * std::sqrt(2.0));
            CHECK(p.contains(proj, 1e-9));
        }
    }
}
