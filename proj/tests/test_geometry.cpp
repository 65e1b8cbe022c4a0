#include <doctest.h>

#include <cmath>
#include <random>

#include "paraset/geometry.hpp"

using namespace paraset;

namespace {

Geometry2D rect_minus_disk() {
    return Geometry2D::difference(RectPrim{{0, 3, 0, 2}},
                                  std::vector<Primitive2D>{DiskPrim{{1.5, 1.0}, 0.5}});
}

// Brute-force distance oracle: dense sampling of every boundary curve,
// filtered by membership.
double brute_force_distance(const Geometry2D& g, Vec2 x, int samples_per_curve = 200000) {
    if (g.contains(x)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const BoundaryCurve& c : g.boundary_curves()) {
        for (int k = 0; k <= samples_per_curve; ++k) {
            double t = static_cast<double>(k) / samples_per_curve;
            Vec2 p;
            if (const auto* seg = std::get_if<SegmentCurve>(&c)) {
                p = {seg->a.x + t * (seg->b.x - seg->a.x), seg->a.y + t * (seg->b.y - seg->a.y)};
            } else {
                const auto& arc = std::get<ArcCurve>(c);
                double th = arc.theta0 + t * (arc.theta1 - arc.theta0);
                p = {arc.center.x + arc.radius * std::cos(th),
                     arc.center.y + arc.radius * std::sin(th)};
            }
            if (!g.contains(p)) continue;
            best = std::min(best, dist(x, p));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("membership of primitives and CSG") {
    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    CHECK(disk.contains({0, 0}));
    CHECK(disk.contains({1, 0}));
    CHECK_FALSE(disk.contains({1.0000001, 0}));

    Geometry2D g = rect_minus_disk();
    CHECK_FALSE(g.contains({1.5, 1.0}));   // removed interior
    CHECK(g.contains({1.0, 1.0}));         // boundary circle of the hole stays in the set
    CHECK(g.contains({0.1, 0.1}));
    CHECK_FALSE(g.contains({-0.1, 0.1}));

    Set1D a;
    a.points = {0, 2, 3};
    CHECK(a.contains(2.0));
    CHECK_FALSE(a.contains(1.0));
}

TEST_CASE("exact distances: primitives") {
    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    CHECK(disk.exact_distance({3, 0}) == doctest::Approx(2.0).epsilon(1e-14));

    Set1D a;
    a.points = {0, 2, 3};
    CHECK(a.distance(2.4) == doctest::Approx(0.4).epsilon(1e-14));

    // Inside the removed disk the nearest set point is the hole's rim.
    Geometry2D g = rect_minus_disk();
    CHECK(g.exact_distance({1.5, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));
    double brute = brute_force_distance(g, {1.5, 1.0}, 20000);
    CHECK(g.exact_distance({1.5, 1.0}) == doctest::Approx(brute).epsilon(1e-3));
}

TEST_CASE("exact distance inside overlapping removed stadiums") {
    // Two stadium holes that overlap each other, as in the planar construction.
    Rect base{-2, 4, -2, 2};
    std::vector<Primitive2D> holes{StadiumPrim{{0.0, 0.0}, {0.5, 0.0}, 1.0},
                                   StadiumPrim{{1.2, 0.0}, {1.5, 0.0}, 0.8}};
    Geometry2D g = Geometry2D::difference(RectPrim{base}, holes);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-0.9, 2.2), uy(-0.9, 0.9);
    int tested = 0;
    for (int k = 0; k < 300; ++k) {
        Vec2 x{ux(rng), uy(rng)};
        if (g.contains(x)) continue;
        double exact = g.exact_distance(x);
        double brute = brute_force_distance(g, x, 20000);
        CHECK(exact == doctest::Approx(brute).epsilon(2e-4));
        ++tested;
    }
    CHECK(tested > 50);
}

TEST_CASE("bounding boxes and diameter bounds") {
    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    Rect bb = disk.bounding_box();
    CHECK(bb.xmin == doctest::Approx(-1.0));
    CHECK(bb.xmax == doctest::Approx(1.0));
    CHECK(disk.diameter_bound() == doctest::Approx(2 * std::sqrt(2.0)));

    Geometry2D stad = Geometry2D::leaf(StadiumPrim{{0, 0}, {2, 0}, 1.0});
    Rect sb = stad.bounding_box();
    CHECK(sb.xmin == doctest::Approx(-1.0));
    CHECK(sb.xmax == doctest::Approx(3.0));
    CHECK(sb.ymin == doctest::Approx(-1.0));
    CHECK(sb.ymax == doctest::Approx(1.0));

    Geometry2D uni = Geometry2D::unite({disk, stad});
    Rect ub = uni.bounding_box();
    CHECK(ub.xmin == doctest::Approx(-1.0));
    CHECK(ub.xmax == doctest::Approx(3.0));

    Set1D a;
    a.points = {0, 3};
    CHECK(a.diameter() == doctest::Approx(3.0));

    Geometry2D rect = Geometry2D::leaf(RectPrim{{0, 3, 0, 2}});
    CHECK(rect.diameter_bound() == doctest::Approx(std::sqrt(13.0)));
}

TEST_CASE("distance/membership consistency and Lipschitz property") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 5.0);
    Geometry2D g = rect_minus_disk();
    for (int k = 0; k < 2000; ++k) {
        Vec2 x{u(rng), u(rng)};
        Vec2 y{u(rng), u(rng)};
        double dx = g.exact_distance(x);
        CHECK((dx == 0.0) == g.contains(x));
        CHECK(std::fabs(dx - g.exact_distance(y)) <= dist(x, y) * (1 + 1e-12) + 1e-12);
    }
}

TEST_CASE("union distance is the minimum over components") {
    Geometry2D a = Geometry2D::leaf(DiskPrim{{0, 0}, 0.5});
    Geometry2D b = Geometry2D::leaf(RectPrim{{2, 3, 0, 1}});
    Geometry2D u = Geometry2D::unite({a, b});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uu(-2.0, 5.0);
    for (int k = 0; k < 500; ++k) {
        Vec2 x{uu(rng), uu(rng)};
        double want = std::min(a.exact_distance(x), b.exact_distance(x));
        CHECK(u.exact_distance(x) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("stadium equals segment-swept union of balls") {
    StadiumPrim st{{0.2, -0.1}, {1.7, 0.4}, 0.6};
    Geometry2D g = Geometry2D::leaf(st);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 3.0);
    for (int k = 0; k < 500; ++k) {
        Vec2 x{u(rng), u(rng)};
        // Oracle: min over dense samples of the segment of the ball distances.
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 4000; ++i) {
            double t = i / 4000.0;
            Vec2 c{st.a.x + t * (st.b.x - st.a.x), st.a.y + t * (st.b.y - st.a.y)};
            best = std::min(best, std::max(0.0, dist(x, c) - st.radius));
        }
        CHECK(g.exact_distance(x) == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("curve intersections") {
    ArcCurve c0{{0, 0}, 1.0, 0, 2 * 3.14159265358979323846};
    ArcCurve c1{{1, 0}, 1.0, 0, 2 * 3.14159265358979323846};
    std::vector<Vec2> pts;
    curve_intersections(c0, c1, pts);
    REQUIRE(pts.size() == 2);
    for (Vec2 p : pts) {
        CHECK(p.x == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::fabs(p.y) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    }
    SegmentCurve s{{-2, 0.5}, {2, 0.5}};
    pts.clear();
    curve_intersections(BoundaryCurve{s}, BoundaryCurve{c0}, pts);
    REQUIRE(pts.size() == 2);
    CHECK(std::fabs(pts[0].x) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-9));
}

TEST_CASE("projection records") {
    Geometry2D two = Geometry2D::leaf(PointSetPrim{{{-1, 0}, {1, 0}}});
    ProjectionRecord rec = two.project({0, 0}, 1e-9);
    CHECK(rec.multiplicity == 2);
    CHECK(rec.distance == doctest::Approx(1.0));
    CHECK(std::fabs(rec.directions[0].x) == doctest::Approx(1.0));

    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    ProjectionRecord r2 = disk.project({2, 0}, 1e-9);
    CHECK(r2.multiplicity == 1);
    CHECK(r2.nearest[0].x == doctest::Approx(1.0).epsilon(1e-13));

    // Projection exactness against exact_distance on random queries.
    Geometry2D g = rect_minus_disk();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 4.0);
    for (int k = 0; k < 300; ++k) {
        Vec2 x{u(rng), u(rng)};
        if (g.contains(x)) continue;
        ProjectionRecord r = g.project(x, 1e-9);
        CHECK(dist(x, r.nearest[0]) == doctest::Approx(g.exact_distance(x)).epsilon(1e-12));
    }
}

TEST_CASE("set1d gaps and validation errors") {
    // [0,1] together with the point 3 and [5,6]: two gaps of length 2.
    Set1D a;
    a.points = {3};
    a.intervals = {{0, 1}, {5, 6}};
    auto gaps = a.gap_lengths();
    REQUIRE(gaps.size() == 2);
    CHECK(gaps[0] == doctest::Approx(2.0));
    CHECK(gaps[1] == doctest::Approx(2.0));

    Set1D bad;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.points = {1, 1};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("difference validation rejects escaping holes") {
    CHECK_THROWS_AS(Geometry2D::difference(RectPrim{{0, 1, 0, 1}},
                                           std::vector<Primitive2D>{DiskPrim{{1.0, 0.5}, 0.2}}),
                    Error);
    // Tangency from inside is allowed.
    CHECK_NOTHROW(Geometry2D::difference(RectPrim{{0, 2, 0, 2}},
                                         std::vector<Primitive2D>{DiskPrim{{1.0, 1.0}, 1.0}}));
}
