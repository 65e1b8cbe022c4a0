#include <doctest.h>

#include <cmath>

#include "paraset/analysis.hpp"
#include "paraset/construction.hpp"

using namespace paraset;

namespace {
constexpr double kPi = 3.14159265358979323846;

VolumeSamples sample_oracle(OracleKind kind, const std::vector<double>& params, double lo,
                            double hi, double step) {
    VolumeSamples vs;
    vs.source = FieldSource::Exact;
    vs.radii = radii_grid(lo, hi, step);
    for (double r : vs.radii) {
        vs.v.push_back(exact_volume_oracle(kind, params, r));
        vs.err.push_back(0.0);
    }
    return vs;
}

Geometry2D rect_boundary_geom(double s) {
    Rect box{0, 3 * s, 0, 2 * s};
    return Geometry2D::difference(RectPrim{box}, std::vector<Primitive2D>{RectPrim{box}});
}
}  // namespace

TEST_CASE("one-sided derivatives on oracle volumes") {
    VolumeSamples disk = sample_oracle(OracleKind::Disk, {1.0}, 0.1, 1.0, 0.005);
    DerivativeEstimate e = one_sided_derivatives(disk, 0.5);
    CHECK(e.left == doctest::Approx(2 * kPi * 1.5).epsilon(0.01));
    CHECK(e.right == doctest::Approx(2 * kPi * 1.5).epsilon(0.01));

    VolumeSamples iu = sample_oracle(OracleKind::IntervalUnion1D, {0, 2, 3}, 0.05, 1.4, 0.005);
    DerivativeEstimate k = one_sided_derivatives(iu, 0.5);
    CHECK(k.left == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(k.right == doctest::Approx(4.0).epsilon(1e-9));

    VolumeSamples rb = sample_oracle(OracleKind::RectBoundary, {1.0}, 0.2, 1.4, 0.005);
    DerivativeEstimate j = one_sided_derivatives(rb, 1.0);
    CHECK(j.jump() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(j.left == doctest::Approx(12 + 2 * kPi).epsilon(1e-9));
}

TEST_CASE("jump detection on exact 1D volumes") {
    Set1D a = construct_dim1(TargetRadii::from_values({1.0, 0.5}));
    VolumeSamples vs = volume_samples_1d(a, radii_grid(0.01, 1.5, 0.005));
    NondiffReport rep = detect_nondiff(vs, 0.5, {0.5, 1.0});
    REQUIRE(rep.detected.size() == 2);
    CHECK(rep.missed.empty());
    for (const Detection& d : rep.detected) CHECK(d.jump == doctest::Approx(2.0).epsilon(1e-6));

    VolumeSamples disk = sample_oracle(OracleKind::Disk, {1.0}, 0.1, 1.0, 0.005);
    CHECK(detect_nondiff(disk).detected.empty());
}

TEST_CASE("exact one-sided derivatives flag every gap radius") {
    // Dyadic radii keep the cumulative sums exact in floating point.
    Set1D a = construct_dim1(TargetRadii::from_values({0.75, 0.375, 0.125}));
    for (double s : {0.75, 0.375, 0.125}) {
        Sided d = volume_1d_derivatives(a, s);
        CHECK(d.left - d.right == doctest::Approx(2.0).epsilon(1e-12));
    }
    Sided smooth = volume_1d_derivatives(a, 0.5);
    CHECK(smooth.left == smooth.right);
}

TEST_CASE("one-sided derivatives need full windows") {
    VolumeSamples disk = sample_oracle(OracleKind::Disk, {1.0}, 0.1, 1.0, 0.005);
    try {
        one_sided_derivatives(disk, 0.11);
        FAIL("expected InsufficientSamples");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InsufficientSamples);
    }
}

TEST_CASE("Kneser check passes on true volumes and fails on a dented one") {
    VolumeSamples disk = sample_oracle(OracleKind::Disk, {1.0}, 0.1, 1.2, 0.005);
    CHECK(kneser_check(disk, 2).pass);

    VolumeSamples iu = sample_oracle(OracleKind::IntervalUnion1D, {0, 2, 3}, 0.05, 2.2, 0.005);
    CHECK(kneser_check(iu, 1).pass);

    VolumeSamples dented = disk;
    std::size_t mid = dented.v.size() / 2;
    for (std::size_t i = mid; i < dented.v.size(); ++i) dented.v[i] -= 0.4;
    CHECK_FALSE(kneser_check(dented, 2).pass);
}

TEST_CASE("derivative continuity at differentiability points") {
    VolumeSamples disk = sample_oracle(OracleKind::Disk, {1.0}, 0.1, 1.0, 0.0025);
    ContinuityReport rep = derivative_continuity_check(disk, 0.5, 0.2, 5, 0.01);
    CHECK(rep.applicable);
    CHECK(rep.converged);

    VolumeSamples rb = sample_oracle(OracleKind::RectBoundary, {1.0}, 0.2, 1.4, 0.0025);
    ContinuityReport away = derivative_continuity_check(rb, 0.6, 0.1, 4, 0.01, {1.0});
    CHECK(away.applicable);
    CHECK(away.converged);
    ContinuityReport at_s = derivative_continuity_check(rb, 1.0, 0.1, 4, 0.01, {1.0});
    CHECK_FALSE(at_s.applicable);
}

TEST_CASE("criticality of points") {
    Geometry2D two = Geometry2D::leaf(PointSetPrim{{{-1, 0}, {1, 0}}});
    CHECK(is_critical(two, {0, 0}, 1e-9, 1e-6));
    CHECK_FALSE(is_critical(two, {0, 0.5}, 1e-9, 1e-6));

    Construction2D c = construct_dim2_eps(TargetRadii::from_values({1.0}));
    double mid = 0.5 * (c.jay[0].lo + c.jay[0].hi);
    CHECK(is_critical(c.geometry, {mid, 0.0}, 1e-9, 1e-6));
}

TEST_CASE("critical value scans") {
    Geometry2D two = Geometry2D::leaf(PointSetPrim{{{-1, 0}, {1, 0}}});
    DistanceField f = make_distance_field(two, 0.01, 1.3);
    CriticalValueScan scan = scan_critical_values(two, f, 0.02);
    bool has_one = false;
    for (double v : scan.values)
        if (std::fabs(v - 1.0) <= 0.02) has_one = true;
    CHECK(has_one);

    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    DistanceField fd = make_distance_field(disk, 0.01, 0.5);
    CHECK(scan_critical_values(disk, fd, 0.02).values.empty());

    Geometry2D rb = rect_boundary_geom(1.0);
    DistanceField fr = make_distance_field(rb, 0.005, 1.2);
    CriticalValueScan s2 = scan_critical_values(rb, fr, 0.02);
    REQUIRE_FALSE(s2.values.empty());
    for (double v : s2.values) CHECK(v == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("differentiability characterization at coarse resolution") {
    Geometry2D rb = rect_boundary_geom(1.0);
    DistanceField f = make_distance_field(rb, 0.004, 1.3);
    CriticalityReport at_s = characterize_differentiability(rb, f, 1.0);
    CHECK_FALSE(at_s.differentiable);
    CHECK(at_s.critical_mass == doctest::Approx(1.0).epsilon(0.15));

    CriticalityReport away = characterize_differentiability(rb, f, 0.7);
    CHECK(away.differentiable);

    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    DistanceField fd = make_distance_field(disk, 0.004, 0.8);
    CHECK(characterize_differentiability(disk, fd, 0.5).differentiable);
}

TEST_CASE("detected radii lie within scanned critical values") {
    TargetRadii n = TargetRadii::from_values({1.0, 0.5});
    GammaPolicy pol;
    pol.gamma0 = 0.1;
    Construction2D c = construct_dim2_eps(n, pol);
    double h = 0.005;
    DistanceField f = make_distance_field(c.geometry, h, 1.2);
    VolumeSamples vs = volume_function(f, radii_grid(0.1, 1.15, h / 2));
    NondiffReport nd = detect_nondiff(vs, 0.5 * 0.05, c.realized, 2 * h);
    CriticalValueScan scan = scan_critical_values(c.geometry, f, 2 * h, true, 200, 7);
    for (const Detection& d : nd.detected) {
        double best = 1e300;
        for (double v : scan.values) best = std::min(best, std::fabs(v - d.r));
        CHECK(best <= 2 * h);
    }
}

TEST_CASE("flat distance basics") {
    SurfaceCloud a;
    a.points = {{0, 0}, {1, 0}, {2, 0}};
    a.weights = {1.0, 1.0, 1.0};
    TentDictionary dict{0.1, 0.05};
    CHECK(flat_distance(a, a, dict) == doctest::Approx(0.0));

    SurfaceCloud doubled = a;
    doubled.weights = {2.0, 2.0, 2.0};
    CHECK(flat_distance(a, doubled, dict) >= doctest::Approx(3.0));  // total-mass gap

    SurfaceCloud empty;
    CHECK_THROWS_AS(flat_distance(a, empty, dict), Error);

    // Circle clouds approach each other as the radii do.
    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    DistanceField f = make_distance_field(disk, 0.005, 0.6);
    SurfaceCloud base = extract_level_set(f, 0.3);
    SurfaceCloud far = extract_level_set(f, 0.42);
    SurfaceCloud near = extract_level_set(f, 0.36);
    TentDictionary d2{0.02, 0.01};
    double dfar = flat_distance(far, base, d2);
    double dnear = flat_distance(near, base, d2);
    CHECK(dnear < dfar);
    CHECK(dfar >= std::fabs(far.total_mass() - base.total_mass()) - 1e-12);
}

TEST_CASE("weak convergence on a disk (coarse)") {
    Geometry2D disk = Geometry2D::leaf(DiskPrim{{0, 0}, 1.0});
    DistanceField f = make_distance_field(disk, 0.005, 0.8);
    ConvergenceReport rep = weak_convergence_report(disk, f, 0.5, 0.2, 5);
    CHECK(rep.eventually_decreasing_below);
    CHECK(rep.eventually_decreasing_above);
    CHECK(rep.final_flat_below < 0.02 * rep.mass_r0);
    CHECK(rep.final_flat_above < 0.02 * rep.mass_r0);
}

TEST_CASE("packed full construction realizes its radii through the grid pipeline") {
    TargetRadii n = TargetRadii::from_values({0.9, 0.4});
    FullConstruction2D fc = construct_dim2_full(n, 4);
    double h = 0.004;
    DistanceField f = make_distance_field(fc.geometry, h, 1.1);
    VolumeSamples vs = volume_function(f, radii_grid(0.05, 1.05, h / 2));
    double min_jump = *std::min_element(fc.predicted_jumps.begin(), fc.predicted_jumps.end());
    NondiffReport nd =
        detect_nondiff_verified(fc.geometry, f, vs, 0.5 * min_jump, fc.realized, 2 * h);
    REQUIRE(nd.detected.size() == 2);
    CHECK(nd.missed.empty());
    CHECK(nd.spurious.empty());
    for (const Detection& d : nd.detected) {
        double jump_expected = 0.0;
        for (std::size_t i = 0; i < fc.realized.size(); ++i)
            if (std::fabs(fc.realized[i] - d.r) < 0.01) jump_expected = fc.predicted_jumps[i];
        CHECK(d.jump == doctest::Approx(jump_expected).epsilon(0.15));
    }
}

TEST_CASE("verdict agreement between detection and characterization") {
    Geometry2D rb = rect_boundary_geom(1.0);
    double h = 0.004;
    DistanceField f = make_distance_field(rb, h, 1.3);
    VolumeSamples vs = volume_function(f, radii_grid(0.1, 1.25, h / 2));
    NondiffReport nd = detect_nondiff(vs, 0.5, {1.0}, 2 * h);
    REQUIRE(nd.detected.size() == 1);
    int agree = 0, audited = 0;
    for (double r : {0.3, 0.5, 0.7, 0.9, 1.1, 1.2, nd.detected[0].r}) {
        bool from_detect = false;
        for (const Detection& d : nd.detected)
            if (std::fabs(d.r - r) <= 2 * h) from_detect = true;
        CriticalityReport cr = characterize_differentiability(rb, f, r);
        audited++;
        if (from_detect == !cr.differentiable) agree++;
    }
    CHECK(agree >= audited * 95 / 100);
}
