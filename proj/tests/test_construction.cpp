#include <doctest.h>

#include <cmath>
#include <random>

#include "paraset/construction.hpp"

using namespace paraset;

namespace {

std::vector<double> random_dyadics(std::mt19937_64& rng, int count) {
    std::uniform_int_distribution<long> dist(1, (1L << 26) - 1);
    std::vector<double> vals;
    while (static_cast<int>(vals.size()) < count) {
        double v = static_cast<double>(dist(rng)) / static_cast<double>(1L << 26);
        if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

bool rect_disjoint(const Rect& a, const Rect& b) {
    return a.xmax < b.xmin || b.xmax < a.xmin || a.ymax < b.ymin || b.ymax < a.ymin;
}

}  // namespace

TEST_CASE("dim-1 construction") {
    Set1D a = construct_dim1(TargetRadii::from_values({1.0, 0.5}));
    CHECK(a.points == std::vector<double>({0.0, 2.0, 3.0}));

    CHECK_THROWS_AS(TargetRadii::from_values({}), Error);

    std::vector<double> geo;
    for (int k = 0; k <= 10; ++k) geo.push_back(std::pow(0.5, k));
    Set1D b = construct_dim1(TargetRadii::from_values(geo));
    CHECK(b.points.size() == 12);
    CHECK(b.points.back() == doctest::Approx(2.0 * (2.0 - std::pow(2.0, -10))).epsilon(1e-15));
}

TEST_CASE("predicted non-differentiability radii in 1D") {
    Set1D a;
    a.points = {0, 2, 3};
    CHECK(predicted_nondiff_1d(a) == std::vector<double>({1.0, 0.5}));

    Set1D interval;
    interval.intervals = {{0, 1}};
    CHECK(predicted_nondiff_1d(interval).empty());

    Set1D uniform;
    uniform.points = {0, 1, 2};
    CHECK(predicted_nondiff_1d(uniform) == std::vector<double>({0.5}));
}

TEST_CASE("dim-1 round trip is exact on dyadic radii") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> size(1, 20);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> vals = random_dyadics(rng, size(rng));
        Set1D a = construct_dim1(TargetRadii::from_values(vals));
        CHECK(predicted_nondiff_1d(a) == vals);
    }
}

TEST_CASE("planar eps-construction metadata") {
    TargetRadii n = TargetRadii::from_values({1.0, 0.5});
    Construction2D c = construct_dim2_eps(n);
    REQUIRE(c.sbar.size() == 2);
    CHECK(c.g[0] == 0.0);
    CHECK(c.g[1] == doctest::Approx(1.0).epsilon(1e-12));  // sqrt(2) sqrt(1/2)
    CHECK(c.jay[0].lo == doctest::Approx(0.0));
    // J_1 starts at g(1) + gamma_{1/2}.
    CHECK(c.jay[1].lo == doctest::Approx(1.0 + c.gamma[0]).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(1.0));

    // Metadata identity: sup max J = sqrt(2b) G_{1/2} + Gamma.
    double width = c.g.back() + c.gamma[0] + c.gamma[1];
    CHECK(c.jay.back().hi == doctest::Approx(width).epsilon(1e-12));
    CHECK(c.rect.xmax == doctest::Approx(c.b + width).epsilon(1e-12));

    // (x, +-s) belongs to A for x in J_s, and the axis distance equals s.
    for (std::size_t i = 0; i < c.sbar.size(); ++i) {
        double s = c.sbar[i];
        for (int k = 0; k <= 6; ++k) {
            double x = c.jay[i].lo + (c.jay[i].hi - c.jay[i].lo) * k / 6.0;
            CHECK(c.geometry.contains({x, s}));
            CHECK(c.geometry.contains({x, -s}));
            CHECK(c.geometry.exact_distance({x, 0.0}) == doctest::Approx(s).epsilon(1e-6));
        }
    }

    Construction2D single = construct_dim2_eps(TargetRadii::from_values({1.0}));
    CHECK(single.rect.xmin == doctest::Approx(-1.0));
    CHECK(single.rect.xmax == doctest::Approx(1.0 + single.gamma[0]).epsilon(1e-15));
    CHECK(single.tangent_to_boundary);
}

TEST_CASE("eps-construction rejects unrealizable inputs") {
    CantorGallery g3 = cantor_gallery(1.0 / 3.0, 8);
    CHECK_THROWS_AS(construct_dim2_eps(g3.endpoints), Error);
}

TEST_CASE("dim-1 construction rejects non-summable generators") {
    CantorGallery g = cantor_gallery(0.3, 12);
    try {
        construct_dim1(g.endpoints, 12);
        FAIL("expected SummabilityViolated");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SummabilityViolated);
    }
}

TEST_CASE("full construction and box construction reject divergent inputs") {
    CantorGallery g3 = cantor_gallery(1.0 / 3.0, 10);
    try {
        construct_dim2_full(g3.endpoints, 3);
        FAIL("expected ConditionViolated");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConditionViolated);
    }
    try {
        construct_boxes_dimd(g3.endpoints, 2, 10);
        FAIL("expected SummabilityViolated");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SummabilityViolated);
    }
}

TEST_CASE("tail decomposition: greedy split with certified bounds") {
    TargetRadii single = TargetRadii::from_values({0.6});
    TailDecomposition td = decompose_tail(single, 0);
    CHECK(td.piece_count == 1);
    CHECK(td.piece_gap_sums[0] == 0.0);

    // A band whose gap sum fits one budget.
    TargetRadii easy = TargetRadii::from_values({1.0, 0.9, 0.8, 0.7});
    TailDecomposition td0 = decompose_tail(easy, 0);
    CHECK(td0.piece_count == 1);

    // A uniform grid of points dense enough to force a split: compare against
    // the exhaustive optimal contiguous partition.
    std::vector<double> pts;
    for (int i = 0; i < 13; ++i) pts.push_back(0.26 + 0.018 * i);
    TargetRadii uni = TargetRadii::from_values(pts);
    TailDecomposition td1 = decompose_tail(uni, 0);
    double budget = 2.0 * std::sqrt(td1.delta);
    int best = 13;
    const int cuts = 12;
    for (int mask = 0; mask < (1 << cuts); ++mask) {
        std::vector<std::vector<double>> pieces(1);
        for (int i = 0; i < 13; ++i) {
            pieces.back().push_back(pts[i]);
            if (i < cuts && (mask >> i & 1)) pieces.emplace_back();
        }
        bool ok = true;
        for (const auto& piece : pieces) {
            double s = 0.0;
            for (std::size_t j = 0; j + 1 < piece.size(); ++j)
                s += std::sqrt(piece[j + 1] - piece[j]);
            if (s > budget) ok = false;
        }
        if (ok) best = std::min<int>(best, static_cast<int>(pieces.size()));
    }
    CHECK(td1.piece_count > 1);
    CHECK(td1.piece_count == best);
    for (double g : td1.piece_gap_sums) CHECK(g <= budget + 1e-12);
    CHECK(td1.piece_count <= td1.band_gap_sum / std::sqrt(td1.delta) + 1.0 + 1e-9);
}

TEST_CASE("full planar construction") {
    TargetRadii n1 = TargetRadii::from_values({1.0});
    FullConstruction2D fc1 = construct_dim2_full(n1, 2);
    CHECK(fc1.pieces.size() == 1);
    CHECK(fc1.realized == std::vector<double>({1.0}));
    CHECK(fc1.unrealized.empty());

    TargetRadii n3 = TargetRadii::from_values({1.0, 0.5, 0.125});
    FullConstruction2D fc3 = construct_dim2_full(n3, 4);
    // Every prescribed radius realized exactly once.
    std::vector<double> sorted = fc3.realized;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    CHECK(sorted == n3.values);

    // Packed rectangles are pairwise disjoint and inside the enclosing disk.
    std::vector<Rect> placed;
    for (const PackedPiece& p : fc3.pieces)
        placed.push_back({p.rect.xmin + p.shift.x, p.rect.xmax + p.shift.x,
                          p.rect.ymin + p.shift.y, p.rect.ymax + p.shift.y});
    for (std::size_t i = 0; i < placed.size(); ++i)
        for (std::size_t j = i + 1; j < placed.size(); ++j)
            CHECK(rect_disjoint(placed[i], placed[j]));
    for (const Rect& r : placed) {
        for (Vec2 corner : {Vec2{r.xmin, r.ymin}, Vec2{r.xmax, r.ymax}})
            CHECK(corner.norm() <= fc3.enclosing_radius + 1e-12);
    }

    // Area bookkeeping from the proof chain.
    double area = 0.0;
    for (const PackedPiece& p : fc3.pieces) area += p.rect.area();
    double rhs = 0.0;
    for (int band = 0; band <= 4; ++band) {
        TailDecomposition td = decompose_tail(n3, band);
        rhs += 12.0 * std::pow(td.delta, 1.5) * td.band_gap_sum + 12.0 * td.delta * td.delta;
    }
    CHECK(area <= rhs + 1e-9);

    // Membership smoke: the enclosing-disk part minus holes plus sub-pieces.
    CHECK(fc3.geometry.contains({fc3.enclosing_radius - 1e-6, 0.0}));
}

TEST_CASE("box construction in several dimensions") {
    TargetRadii n = TargetRadii::from_values({1.0});
    BoxConstruction b2 = construct_boxes_dimd(n, 2);
    REQUIRE(b2.boxes.size() == 1);
    CHECK(b2.boxes[0].size == std::vector<double>({3.0, 2.0}));
    CHECK(b2.boxes[0].critical_cube[0].lo == doctest::Approx(1.0));
    CHECK(b2.boxes[0].critical_cube[0].hi == doctest::Approx(2.0));
    CHECK(b2.boxes[0].critical_cube[1].lo == doctest::Approx(1.0));
    CHECK(b2.geometry2d.has_value());

    BoxConstruction b1 = construct_boxes_dimd(n, 1);
    CHECK(b1.boxes[0].size == std::vector<double>({2.0}));

    TargetRadii n2 = TargetRadii::from_values({1.0, 0.5});
    BoxConstruction b3 = construct_boxes_dimd(n2, 3);
    double v0 = b3.boxes[0].size[0] * b3.boxes[0].size[1] * b3.boxes[0].size[2];
    double v1 = b3.boxes[1].size[0] * b3.boxes[1].size[1] * b3.boxes[1].size[2];
    CHECK(v0 == doctest::Approx(18.0));
    CHECK(v1 == doctest::Approx(18.0 / 8.0));
    // Disjoint shifted boxes.
    bool disjoint = false;
    for (int axis = 0; axis < 3; ++axis) {
        double a0 = b3.boxes[0].shift[axis], a1 = a0 + b3.boxes[0].size[axis];
        double b0 = b3.boxes[1].shift[axis], b1e = b0 + b3.boxes[1].size[axis];
        if (a1 < b0 || b1e < a0) disjoint = true;
    }
    CHECK(disjoint);
}

TEST_CASE("rectangle packing") {
    PackResult one = pack_rectangles({Rect{-1, 1, -1, 1}});
    CHECK(one.shifts[0].x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(one.shifts[0].y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(one.enclosing_radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    std::vector<Rect> squares{{0, 1, 0, 1}, {0, 1, 0, 1}};
    PackResult two = pack_rectangles(squares);
    Rect a{squares[0].xmin + two.shifts[0].x, squares[0].xmax + two.shifts[0].x,
           squares[0].ymin + two.shifts[0].y, squares[0].ymax + two.shifts[0].y};
    Rect b{squares[1].xmin + two.shifts[1].x, squares[1].xmax + two.shifts[1].x,
           squares[1].ymin + two.shifts[1].y, squares[1].ymax + two.shifts[1].y};
    CHECK(rect_disjoint(a, b));
    CHECK(two.enclosing_radius <= 2.5);

    // 100 shrinking squares stay inside a bounded disk (shelf accounting).
    std::vector<Rect> many;
    double total_area = 0.0, max_side = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double s = 1.0 / k;
        many.push_back({0, s, 0, s});
        total_area += s * s * 1.05 * 1.05;
        max_side = std::max(max_side, s * 1.05);
    }
    PackResult pk = pack_rectangles(many);
    double W = std::max(max_side, std::sqrt(2.0 * total_area / (1.05 * 1.05)));
    double height_bound = max_side + 2.0 * total_area / W + max_side;
    double bound = 0.5 * std::hypot(W, height_bound) * 1.02;
    CHECK(pk.enclosing_radius <= bound);
    for (std::size_t i = 0; i < many.size(); ++i)
        for (std::size_t j = i + 1; j < many.size(); ++j) {
            Rect ri{many[i].xmin + pk.shifts[i].x, many[i].xmax + pk.shifts[i].x,
                    many[i].ymin + pk.shifts[i].y, many[i].ymax + pk.shifts[i].y};
            Rect rj{many[j].xmin + pk.shifts[j].x, many[j].xmax + pk.shifts[j].x,
                    many[j].ymin + pk.shifts[j].y, many[j].ymax + pk.shifts[j].y};
            CHECK(rect_disjoint(ri, rj));
        }
}
