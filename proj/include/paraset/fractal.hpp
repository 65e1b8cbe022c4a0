#ifndef PARASET_FRACTAL_HPP
#define PARASET_FRACTAL_HPP

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "paraset/core.hpp"
#include "paraset/geometry.hpp"

namespace paraset {

/// Geometric continuation of a fractal string beyond its explicit lengths:
/// level j >= 0 contributes count0*count_ratio^j gaps of length
/// length0*length_ratio^j.
struct GeometricTail {
    double count0 = 0.0;
    double length0 = 0.0;
    double count_ratio = 1.0;
    double length_ratio = 1.0;
};

/// Non-increasing positive gap lengths, optionally generator-backed.
struct FractalString {
    std::vector<double> lengths;
    std::optional<GeometricTail> tail;

    void validate() const;
};

/// Sum of alpha-th powers of the gap lengths. Divergent when the explicit
/// partial sums exceed 1e12 or the tail's per-level ratio fails the ratio
/// test with margin 1e-3.
ExtReal gap_sum(const FractalString& fs, double alpha);

/// Fractal string of a compact 1D set: bounded complementary interval lengths
/// inside the convex hull, non-increasing.
FractalString fractal_string_of(const Set1D& a);

FractalString scaled(const FractalString& fs, double c);

/// A prescribed set of radii N, finite or backed by one of the Cantor-gallery
/// generators. Generator-backed sets are evaluated on truncations.
struct TargetRadii {
    std::vector<double> values;         // strictly decreasing, positive
    std::vector<double> closure_extra;  // extra accumulation points of cl(N)
    bool origin_accumulates = false;
    bool closure_known_null = true;  // structural: countable or null-by-construction

    struct CantorGen {
        double q = 0.0;  // endpoints of complementary gaps of F_q; closure F_q
    };
    struct RearrangedGen {
        double q = 0.0;  // gap intervals of F_q repacked side by side from 1
    };
    std::variant<std::monostate, CantorGen, RearrangedGen> generator;
    int default_depth = 14;

    static TargetRadii from_values(std::vector<double> vals);

    void validate() const;
    bool generator_backed() const;
    double sup_closure() const;
    double inf_closure() const;

    /// Truncated value list (descending). Explicit sets ignore depth.
    std::vector<double> materialize_values(int depth = 0) const;
    /// Truncated cl(N) as an ascending point list, accumulation points included.
    std::vector<double> closure_points(int depth = 0) const;
};

/// G_{1/2}(cl(N) cap [r, infinity)), evaluated on the depth-truncation.
ExtReal tail_gap_sum(const TargetRadii& n, double r, int depth = 0);

/// G_{1/2}(cl(N)) with cross-depth divergence detection for generator sets.
ExtReal closure_gap_sum_half(const TargetRadii& n, int depth = 0);

/// Sum of p-th powers over N with cross-depth divergence detection.
ExtReal radii_power_sum(const TargetRadii& n, double p, int depth = 0);

enum class TailVerdict { Finite, Infinite, Inconclusive };

struct IntegralReport {
    double value = 0.0;       // piecewise-exact integral on the deepest truncation
    double tail_bound = 0.0;  // geometric extrapolation of the unresolved part
    TailVerdict verdict = TailVerdict::Finite;
    double increment_ratio = 0.0;    // cross-depth growth ratio of the integral
    std::vector<double> band_sums;   // delta_n^{3/2} G_{1/2}(K_n), n = 0, 1, ...
    double band_decay_ratio = 0.0;   // trailing ratio of the dyadic band sums
};

/// Integral condition (dim-2, case (ii)): int_0^inf G_{1/2}(cl(N) cap [r,inf)) sqrt(r) dr.
/// The integrand is piecewise constant between points of cl(N), so the value
/// is integrated exactly on the truncation; the verdict comes from a
/// geometric-decay test of the dyadic band sums / cross-depth increments.
/// Throws InconclusiveTail if throw_on_inconclusive and no verdict is possible.
IntegralReport integral_condition(const TargetRadii& n, int depth = 0,
                                  bool throw_on_inconclusive = true);

struct ConditionReport {
    ExtReal gap_sum_half;
    bool lebesgue_null = false;
    ExtReal integral_value;
    TailVerdict integral_verdict = TailVerdict::Finite;
    ExtReal sum_s, sum_s2, sum_sd;
    int dim = 2;
    double eps = 0.0;
    bool verdict_i = false;
    bool verdict_ii = false;
};

/// Checks both characterization conditions for realizability in the plane,
/// plus the simpler sufficient conditions (summability, square-summability).
ConditionReport check_dim2_conditions(const TargetRadii& n, double eps, int dim = 2, int depth = 0);

struct CantorGallery {
    double q = 0.0;
    int depth = 0;
    Set1D f_approx;         // level-depth construction intervals of F_q
    TargetRadii endpoints;  // E_q
    TargetRadii rearranged; // E'_q
    FractalString string;   // explicit levels 0..depth-1 plus geometric tail

    /// (1-2q)^alpha / (1 - 2 q^alpha) when 2 q^alpha < 1, else divergent.
    ExtReal closed_form_gap_sum(double alpha) const;
};

CantorGallery cantor_gallery(double q, int depth);

struct BoxDimFit {
    double dimension = 0.0;
    double dim_stderr = 0.0;
    std::vector<std::pair<double, std::size_t>> counts;  // (scale, N(scale))
};

/// Least-squares slope of log N(delta) against log(1/delta).
/// Needs >= 4 scales spanning >= 2 decades.
BoxDimFit box_counting_dimension(const Set1D& a, const std::vector<double>& scales);

}  // namespace paraset

#endif
