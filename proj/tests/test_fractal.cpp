#include <doctest.h>

#include <cmath>
#include <random>

#include "paraset/fractal.hpp"

using namespace paraset;

TEST_CASE("fractal strings of 1D sets") {
    Set1D a;
    a.points = {0, 2, 3};
    FractalString fs = fractal_string_of(a);
    CHECK(fs.lengths == std::vector<double>({2.0, 1.0}));

    Set1D interval;
    interval.intervals = {{0, 1}};
    CHECK(fractal_string_of(interval).lengths.empty());

    Set1D mixed;  // [0,1], {3}, [5,6]
    mixed.points = {3};
    mixed.intervals = {{0, 1}, {5, 6}};
    CHECK(fractal_string_of(mixed).lengths == std::vector<double>({2.0, 2.0}));
}

TEST_CASE("gap sums: direct, closed form, divergence") {
    FractalString fs;
    fs.lengths = {2.0, 1.0};
    CHECK(gap_sum(fs, 1.0).value == doctest::Approx(3.0));

    CantorGallery g9 = cantor_gallery(1.0 / 9.0, 14);
    ExtReal s = gap_sum(g9.string, 0.5);
    REQUIRE(s.finite);
    CHECK(s.value == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));
    ExtReal closed = g9.closed_form_gap_sum(0.5);
    CHECK(closed.value == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));

    CantorGallery g3 = cantor_gallery(1.0 / 3.0, 10);
    CHECK_FALSE(gap_sum(g3.string, 0.5).finite);
    CHECK_FALSE(g3.closed_form_gap_sum(0.5).finite);
}

TEST_CASE("gallery cross-check: truncations increase to the closed form") {
    double q = 1.0 / 9.0;
    double closed = std::sqrt(7.0);
    double prev = 0.0;
    for (int depth : {4, 6, 8, 10, 12}) {
        CantorGallery g = cantor_gallery(q, depth);
        ExtReal partial = gap_sum(fractal_string_of(g.f_approx), 0.5);
        REQUIRE(partial.finite);
        CHECK(partial.value > prev);
        CHECK(partial.value < closed);
        prev = partial.value;
    }
    CHECK(closed - prev < 0.05);
}

TEST_CASE("gap-sum scaling identity") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int t = 0; t < 50; ++t) {
        FractalString fs;
        for (int i = 0; i < 12; ++i) fs.lengths.push_back(u(rng));
        std::sort(fs.lengths.begin(), fs.lengths.end(), std::greater<double>());
        double c = u(rng);
        double alpha = u(rng);
        ExtReal a = gap_sum(scaled(fs, c), alpha);
        ExtReal b = gap_sum(fs, alpha);
        CHECK(a.value == doctest::Approx(std::pow(c, alpha) * b.value).epsilon(1e-12));
    }
}

TEST_CASE("tail gap sums") {
    TargetRadii n = TargetRadii::from_values({1.0, 0.5, 0.25});
    // r = 0.3 keeps {1/2, 1}: single gap of length 1/2.
    CHECK(tail_gap_sum(n, 0.3).value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    TargetRadii single = TargetRadii::from_values({1.0});
    CHECK(tail_gap_sum(single, 0.5).value == 0.0);
    CHECK(tail_gap_sum(n, 2.0).value == 0.0);

    // Monotone non-increasing in r.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.01, 1.5);
    for (int t = 0; t < 30; ++t) {
        std::vector<double> vals;
        for (int i = 0; i < 10; ++i) vals.push_back(u(rng));
        TargetRadii m = TargetRadii::from_values(vals);
        double r1 = u(rng), r2 = u(rng);
        if (r1 > r2) std::swap(r1, r2);
        CHECK(tail_gap_sum(m, r1).value >= tail_gap_sum(m, r2).value - 1e-12);
    }
}

TEST_CASE("integral condition: finite sets, exact piecewise value") {
    TargetRadii n = TargetRadii::from_values({1.0, 0.5});
    IntegralReport rep = integral_condition(n);
    CHECK(rep.verdict == TailVerdict::Finite);
    // Hand-computed piecewise value: (2/3) sqrt(1/2) (1/2)^{3/2} = 1/6.
    CHECK(rep.value == doctest::Approx(1.0 / 6.0).epsilon(1e-9));

    // Independent quadrature oracle (midpoint rule on the tail gap sum).
    double I = 0.0;
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
        double r = (k + 0.5) / steps;  // integrand vanishes beyond max N = 1
        double g = r <= 0.5 ? std::sqrt(0.5) : 0.0;
        I += g * std::sqrt(r) / steps;
    }
    CHECK(rep.value == doctest::Approx(I).epsilon(1e-3));
}

TEST_CASE("integral condition: gallery verdicts") {
    CantorGallery e03 = cantor_gallery(0.3, 14);
    CHECK(integral_condition(e03.endpoints, 14, false).verdict == TailVerdict::Infinite);

    CantorGallery ep03 = cantor_gallery(0.3, 18);
    IntegralReport fin = integral_condition(ep03.rearranged, 18, false);
    CHECK(fin.verdict == TailVerdict::Finite);

    // q < 1/4: even the endpoint set satisfies the integral condition.
    CantorGallery e02 = cantor_gallery(0.2, 14);
    CHECK(integral_condition(e02.endpoints, 14, false).verdict == TailVerdict::Finite);
}

TEST_CASE("dim-2 condition reports") {
    std::vector<double> vals;
    for (int k = 1; k <= 20; ++k) vals.push_back(1.0 + 1.0 / (k * k));
    TargetRadii accum = TargetRadii::from_values(vals);
    ConditionReport rep = check_dim2_conditions(accum, accum.inf_closure());
    CHECK(rep.verdict_i);

    CantorGallery g3 = cantor_gallery(1.0 / 3.0, 12);
    ConditionReport bad = check_dim2_conditions(g3.endpoints, 0.1, 2, 12);
    CHECK_FALSE(bad.verdict_i);
    CHECK_FALSE(bad.verdict_ii);
    CHECK_FALSE(bad.gap_sum_half.finite);

    TargetRadii fin = TargetRadii::from_values({0.9, 0.3, 0.2});
    ConditionReport ok = check_dim2_conditions(fin, 0.2);
    CHECK(ok.verdict_i);
    CHECK(ok.verdict_ii);
    CHECK(ok.sum_s.finite);
    CHECK(ok.sum_s.value == doctest::Approx(1.4));
}

TEST_CASE("cantor gallery structure") {
    double q = 1.0 / 3.0;
    CantorGallery g = cantor_gallery(q, 6);
    // Level k carries 2^k gaps of length (1-2q) q^k.
    std::size_t idx = 0;
    for (int k = 0; k < 6; ++k) {
        double len = (1 - 2 * q) * std::pow(q, k);
        for (int i = 0; i < (1 << k); ++i, ++idx)
            CHECK(g.string.lengths[idx] == doctest::Approx(len).epsilon(1e-12));
    }
    CHECK(g.f_approx.intervals.size() == 64);

    // E'_q starts 1, 2q, 2q^2 + q, 4q^2, ...
    std::vector<double> ep = g.rearranged.materialize_values(3);
    CHECK(ep[0] == doctest::Approx(1.0));
    CHECK(ep[1] == doctest::Approx(2 * q));
    CHECK(ep[2] == doctest::Approx(2 * q * q + q).epsilon(1e-12));
    CHECK(ep[3] == doctest::Approx(4 * q * q).epsilon(1e-12));
}

TEST_CASE("box-counting dimension") {
    std::vector<double> scales;
    for (int j = 4; j <= 12; ++j) scales.push_back(std::pow(2.0, -j));

    Set1D interval;
    interval.intervals = {{0, 1}};
    CHECK(box_counting_dimension(interval, scales).dimension == doctest::Approx(1.0).epsilon(0.05));

    CantorGallery g = cantor_gallery(0.25, 12);
    BoxDimFit fit = box_counting_dimension(g.f_approx, scales);
    CHECK(fit.dimension == doctest::Approx(0.5).epsilon(0.1));

    Set1D pts;
    pts.points = {0, 0.3, 0.7, 1.0};
    CHECK(std::fabs(box_counting_dimension(pts, scales).dimension) < 0.05);

    CHECK_THROWS_AS(box_counting_dimension(interval, {0.5, 0.4, 0.3, 0.25}), Error);
}

TEST_CASE("power sums over generators detect divergence") {
    CantorGallery e03 = cantor_gallery(0.3, 14);
    CHECK_FALSE(radii_power_sum(e03.endpoints, 1.0, 14).finite);
    // E'_{0.3}: sum of values diverges (4q > 1), sum of squares converges.
    CantorGallery ep = cantor_gallery(0.3, 16);
    CHECK_FALSE(radii_power_sum(ep.rearranged, 1.0, 16).finite);
    CHECK(radii_power_sum(ep.rearranged, 2.0, 16).finite);
}
