#include "paraset/fractal.hpp"

#include <algorithm>
#include <cmath>

namespace paraset {

namespace {

constexpr double kDivergenceBudget = 1e12;
constexpr double kRatioMargin = 1e-3;

// Gap endpoints of F_q down to the given level, appended to `out`.
void cantor_endpoints(double a, double len, int level, int depth, double q, std::vector<double>& out) {
    if (level >= depth) return;
    double left_gap = a + q * len;
    double right_gap = a + len - q * len;
    out.push_back(left_gap);
    out.push_back(right_gap);
    cantor_endpoints(a, q * len, level + 1, depth, q, out);
    cantor_endpoints(right_gap, q * len, level + 1, depth, q, out);
}

// Level-`depth` construction intervals of F_q, ascending.
void cantor_intervals(double a, double len, int level, int depth, double q, std::vector<Interval>& out) {
    if (level == depth) {
        out.push_back({a, a + len});
        return;
    }
    cantor_intervals(a, q * len, level + 1, depth, q, out);
    cantor_intervals(a + len - q * len, q * len, level + 1, depth, q, out);
}

std::vector<double> rearranged_points(double q, int depth) {
    std::vector<double> pts;
    pts.push_back(1.0);
    double x = 1.0;
    for (int k = 0; k < depth; ++k) {
        double len = (1.0 - 2.0 * q) * std::pow(q, k);
        long copies = 1L << k;
        for (long i = 0; i < copies; ++i) {
            x -= len;
            pts.push_back(x);
        }
    }
    return pts;  // descending by construction
}

double suffix_sqrt_gap_sum(const std::vector<double>& asc, size_t from) {
    double s = 0.0;
    for (size_t i = from; i + 1 < asc.size(); ++i) s += std::sqrt(asc[i + 1] - asc[i]);
    return s;
}

// Exact piecewise integral of G_{1/2}(K cap [r,inf)) sqrt(r) dr over a finite
// point set K given ascending.
double piecewise_integral(const std::vector<double>& asc) {
    if (asc.size() < 2) return 0.0;
    size_t m = asc.size();
    std::vector<double> suffix(m + 1, 0.0);
    for (size_t i = m - 1; i-- > 0;) suffix[i] = suffix[i + 1] + std::sqrt(asc[i + 1] - asc[i]);
    // suffix[i] = G of {asc[i], ...}. For r in (asc[i], asc[i+1]], G = suffix[i+1].
    double I = suffix[0] * std::pow(asc[0], 1.5);
    for (size_t i = 0; i + 1 < m; ++i)
        I += suffix[i + 1] * (std::pow(asc[i + 1], 1.5) - std::pow(asc[i], 1.5));
    return I * (2.0 / 3.0);
}

int effective_depth(const TargetRadii& n, int depth) {
    return depth > 0 ? depth : n.default_depth;
}

}  // namespace

// ---------------------------------------------------------------------------
// FractalString
// ---------------------------------------------------------------------------

void FractalString::validate() const {
    for (size_t i = 0; i < lengths.size(); ++i) {
        require(lengths[i] > 0.0, Errc::InvalidArgument, "gap length must be positive");
        if (i + 1 < lengths.size())
            require(lengths[i] >= lengths[i + 1], Errc::InvalidArgument, "lengths must be non-increasing");
    }
    if (tail) {
        require(tail->count0 > 0.0 && tail->length0 > 0.0, Errc::InvalidArgument, "bad tail");
        require(tail->count_ratio >= 1.0 && tail->length_ratio > 0.0 && tail->length_ratio < 1.0,
                Errc::InvalidArgument, "bad tail ratios");
        if (!lengths.empty())
            require(tail->length0 <= lengths.back() + 1e-12, Errc::InvalidArgument,
                    "tail must continue non-increasingly");
    }
}

ExtReal gap_sum(const FractalString& fs, double alpha) {
    require(alpha > 0.0, Errc::InvalidArgument, "alpha must be positive");
    fs.validate();
    double s = 0.0;
    for (double l : fs.lengths) {
        s += std::pow(l, alpha);
        if (s > kDivergenceBudget) return ExtReal::infinite();
    }
    if (fs.tail) {
        double rho = fs.tail->count_ratio * std::pow(fs.tail->length_ratio, alpha);
        if (rho >= 1.0 - kRatioMargin) return ExtReal::infinite();
        s += fs.tail->count0 * std::pow(fs.tail->length0, alpha) / (1.0 - rho);
    }
    return ExtReal::of(s);
}

FractalString fractal_string_of(const Set1D& a) {
    FractalString fs;
    fs.lengths = a.gap_lengths();
    return fs;
}

FractalString scaled(const FractalString& fs, double c) {
    require(c > 0.0, Errc::InvalidArgument, "scale must be positive");
    FractalString out = fs;
    for (double& l : out.lengths) l *= c;
    if (out.tail) out.tail->length0 *= c;
    return out;
}

// ---------------------------------------------------------------------------
// TargetRadii
// ---------------------------------------------------------------------------

TargetRadii TargetRadii::from_values(std::vector<double> vals) {
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    TargetRadii n;
    n.values = std::move(vals);
    n.validate();
    return n;
}

void TargetRadii::validate() const {
    require(!values.empty() || generator_backed(), Errc::EmptySet, "empty target radii");
    for (size_t i = 0; i < values.size(); ++i) {
        require(values[i] > 0.0, Errc::InvalidArgument, "radii must be positive");
        if (i + 1 < values.size())
            require(values[i] > values[i + 1], Errc::InvalidArgument, "radii must be strictly decreasing");
    }
    for (double c : closure_extra) {
        require(c >= 0.0, Errc::InvalidArgument, "closure point must be nonnegative");
        require(!std::binary_search(values.rbegin(), values.rend(), c), Errc::InvalidArgument,
                "closure_extra must be disjoint from values");
    }
    if (const auto* g = std::get_if<CantorGen>(&generator))
        require(g->q > 0.0 && g->q < 0.5, Errc::InvalidArgument, "cantor generator needs q in (0,1/2)");
    if (const auto* g = std::get_if<RearrangedGen>(&generator))
        require(g->q > 0.0 && g->q < 0.5, Errc::InvalidArgument, "generator needs q in (0,1/2)");
}

bool TargetRadii::generator_backed() const {
    return !std::holds_alternative<std::monostate>(generator);
}

double TargetRadii::sup_closure() const {
    if (generator_backed()) return 1.0;
    double m = values.empty() ? 0.0 : values.front();
    for (double c : closure_extra) m = std::max(m, c);
    return m;
}

double TargetRadii::inf_closure() const {
    if (generator_backed()) return 0.0;
    double m = values.empty() ? std::numeric_limits<double>::infinity() : values.back();
    for (double c : closure_extra) m = std::min(m, c);
    return m;
}

std::vector<double> TargetRadii::materialize_values(int depth) const {
    validate();
    int d = effective_depth(*this, depth);
    if (const auto* g = std::get_if<CantorGen>(&generator)) {
        std::vector<double> pts;
        cantor_endpoints(0.0, 1.0, 0, d, g->q, pts);
        std::sort(pts.begin(), pts.end(), std::greater<double>());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }
    if (const auto* g = std::get_if<RearrangedGen>(&generator)) return rearranged_points(g->q, d);
    return values;
}

std::vector<double> TargetRadii::closure_points(int depth) const {
    std::vector<double> pts = materialize_values(depth);
    if (std::holds_alternative<CantorGen>(generator)) {
        pts.push_back(0.0);
        pts.push_back(1.0);
    } else if (std::holds_alternative<RearrangedGen>(generator)) {
        pts.push_back(0.0);
    } else {
        pts.insert(pts.end(), closure_extra.begin(), closure_extra.end());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// ---------------------------------------------------------------------------
// Gap sums and conditions
// ---------------------------------------------------------------------------

ExtReal tail_gap_sum(const TargetRadii& n, double r, int depth) {
    require(r > 0.0, Errc::InvalidArgument, "r must be positive");
    std::vector<double> pts = n.closure_points(depth);
    auto it = std::lower_bound(pts.begin(), pts.end(), r);
    size_t from = static_cast<size_t>(it - pts.begin());
    if (from >= pts.size()) return ExtReal::of(0.0);
    return ExtReal::of(suffix_sqrt_gap_sum(pts, from));
}

namespace {

// Generic cross-depth divergence detector: evaluates `f` at three depths and
// applies a ratio test to the increments.
struct GrowthProbe {
    double value = 0.0;       // deepest evaluation
    double tail_bound = 0.0;  // extrapolated remainder when decaying
    TailVerdict verdict = TailVerdict::Finite;
    double ratio = 0.0;
};

template <typename F>
GrowthProbe probe_growth(const TargetRadii& n, int depth, F&& f) {
    GrowthProbe p;
    if (!n.generator_backed()) {
        p.value = f(depth);
        return p;
    }
    int d = std::max(depth, 7);
    double v0 = f(d - 4), v1 = f(d - 2), v2 = f(d);
    p.value = v2;
    double d1 = v1 - v0, d2 = v2 - v1;
    if (std::fabs(d2) <= 1e-12 * std::max(1.0, std::fabs(v2))) {
        p.tail_bound = std::fabs(d2);
        return p;
    }
    p.ratio = d2 / d1;
    if (d1 <= 0.0 || p.ratio >= 1.0 - kRatioMargin) {
        p.verdict = p.ratio >= 1.0 ? TailVerdict::Infinite : TailVerdict::Inconclusive;
        if (d1 <= 0.0) p.verdict = TailVerdict::Inconclusive;
        return p;
    }
    if (p.ratio > 0.97) {
        p.verdict = TailVerdict::Inconclusive;
        return p;
    }
    p.tail_bound = d2 * p.ratio / (1.0 - p.ratio);
    return p;
}

}  // namespace

ExtReal closure_gap_sum_half(const TargetRadii& n, int depth) {
    int d = effective_depth(n, depth);
    GrowthProbe p = probe_growth(n, d, [&](int dd) {
        std::vector<double> pts = n.closure_points(dd);
        return suffix_sqrt_gap_sum(pts, 0);
    });
    if (p.verdict == TailVerdict::Infinite) return ExtReal::infinite();
    if (p.verdict == TailVerdict::Inconclusive)
        fail(Errc::InconclusiveTail, "gap sum growth test inconclusive at this depth");
    return ExtReal::of(p.value + p.tail_bound);
}

ExtReal radii_power_sum(const TargetRadii& n, double pw, int depth) {
    int d = effective_depth(n, depth);
    GrowthProbe p = probe_growth(n, d, [&](int dd) {
        std::vector<double> vals = n.materialize_values(dd);
        double s = 0.0;
        for (double v : vals) s += std::pow(v, pw);
        return s;
    });
    if (p.verdict == TailVerdict::Infinite) return ExtReal::infinite();
    if (p.verdict == TailVerdict::Inconclusive)
        fail(Errc::InconclusiveTail, "power sum growth test inconclusive at this depth");
    return ExtReal::of(p.value + p.tail_bound);
}

IntegralReport integral_condition(const TargetRadii& n, int depth, bool throw_on_inconclusive) {
    n.validate();
    int d = effective_depth(n, depth);
    IntegralReport rep;

    GrowthProbe p = probe_growth(n, d, [&](int dd) { return piecewise_integral(n.closure_points(dd)); });
    rep.value = p.value;
    rep.tail_bound = p.tail_bound;
    rep.verdict = p.verdict;
    rep.increment_ratio = p.ratio;

    // Dyadic band diagnostics: t_n = delta_n^{3/2} G_{1/2}(K_n) with
    // delta_n = b 2^{-n} and K_n = cl(N) cap [delta_{n+1}, delta_n].
    std::vector<double> pts = n.closure_points(d);
    double b = n.generator_backed() ? 1.0 : n.sup_closure();
    double pmin = 0.0;
    for (double v : pts)
        if (v > 0.0) { pmin = v; break; }
    if (pmin > 0.0 && b > 0.0) {
        int n_max = std::min(48, static_cast<int>(std::ceil(std::log2(b / pmin))));
        for (int band = 0; band <= n_max; ++band) {
            double hi = b * std::pow(2.0, -band);
            double lo = 0.5 * hi;
            auto i0 = std::lower_bound(pts.begin(), pts.end(), lo);
            auto i1 = std::upper_bound(pts.begin(), pts.end(), hi);
            double g = 0.0;
            for (auto it = i0; it != i1; ++it) {
                auto nx = std::next(it);
                if (nx != i1) g += std::sqrt(*nx - *it);
            }
            rep.band_sums.push_back(std::pow(hi, 1.5) * g);
        }
        // Trailing decay ratio over the last nonzero stretch.
        double worst = 0.0;
        int used = 0;
        for (size_t i = rep.band_sums.size(); i-- > 1 && used < 6;) {
            if (rep.band_sums[i] > 0.0 && rep.band_sums[i - 1] > 0.0) {
                worst = std::max(worst, rep.band_sums[i] / rep.band_sums[i - 1]);
                ++used;
            }
        }
        rep.band_decay_ratio = worst;
    }

    if (rep.verdict == TailVerdict::Inconclusive && throw_on_inconclusive)
        fail(Errc::InconclusiveTail, "integral condition: truncation too shallow for a verdict");
    return rep;
}

ConditionReport check_dim2_conditions(const TargetRadii& n, double eps, int dim, int depth) {
    n.validate();
    ConditionReport rep;
    rep.eps = eps;
    rep.dim = dim;
    rep.lebesgue_null = n.closure_known_null;

    auto guarded = [&](auto&& f) -> ExtReal {
        try {
            return f();
        } catch (const Error& e) {
            if (e.code() == Errc::InconclusiveTail) return ExtReal::infinite();
            throw;
        }
    };
    rep.gap_sum_half = guarded([&] { return closure_gap_sum_half(n, depth); });
    rep.sum_s = guarded([&] { return radii_power_sum(n, 1.0, depth); });
    rep.sum_s2 = guarded([&] { return radii_power_sum(n, 2.0, depth); });
    rep.sum_sd = guarded([&] { return radii_power_sum(n, static_cast<double>(dim), depth); });

    IntegralReport ir = integral_condition(n, depth, false);
    rep.integral_verdict = ir.verdict;
    rep.integral_value =
        ir.verdict == TailVerdict::Finite ? ExtReal::of(ir.value + ir.tail_bound) : ExtReal::infinite();

    rep.verdict_i =
        eps > 0.0 && n.inf_closure() >= eps && rep.lebesgue_null && rep.gap_sum_half.finite;
    rep.verdict_ii = rep.lebesgue_null && ir.verdict == TailVerdict::Finite;
    return rep;
}

// ---------------------------------------------------------------------------
// Cantor gallery
// ---------------------------------------------------------------------------

ExtReal CantorGallery::closed_form_gap_sum(double alpha) const {
    double rho = 2.0 * std::pow(q, alpha);
    if (rho >= 1.0) return ExtReal::infinite();
    return ExtReal::of(std::pow(1.0 - 2.0 * q, alpha) / (1.0 - rho));
}

CantorGallery cantor_gallery(double q, int depth) {
    require(q > 0.0 && q < 0.5, Errc::InvalidArgument, "q must be in (0, 1/2)");
    require(depth >= 1 && depth <= 20, Errc::InvalidArgument, "depth must be in [1, 20]");
    CantorGallery g;
    g.q = q;
    g.depth = depth;

    std::vector<Interval> ivs;
    cantor_intervals(0.0, 1.0, 0, depth, q, ivs);
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    g.f_approx.intervals = std::move(ivs);

    g.endpoints.generator = TargetRadii::CantorGen{q};
    g.endpoints.default_depth = depth;
    g.endpoints.origin_accumulates = true;
    g.endpoints.closure_known_null = true;  // lambda(F_q) = lim (2q)^k = 0

    g.rearranged.generator = TargetRadii::RearrangedGen{q};
    g.rearranged.default_depth = depth;
    g.rearranged.origin_accumulates = true;
    g.rearranged.closure_known_null = true;

    for (int k = 0; k < depth; ++k) {
        double len = (1.0 - 2.0 * q) * std::pow(q, k);
        long copies = 1L << k;
        for (long i = 0; i < copies; ++i) g.string.lengths.push_back(len);
    }
    g.string.tail = GeometricTail{std::pow(2.0, depth), (1.0 - 2.0 * q) * std::pow(q, depth), 2.0, q};
    g.string.validate();
    return g;
}

// ---------------------------------------------------------------------------
// Box-counting dimension
// ---------------------------------------------------------------------------

BoxDimFit box_counting_dimension(const Set1D& a, const std::vector<double>& scales) {
    a.validate();
    require(scales.size() >= 4, Errc::InvalidArgument, "need at least 4 scales");
    double smin = *std::min_element(scales.begin(), scales.end());
    double smax = *std::max_element(scales.begin(), scales.end());
    require(smin > 0.0, Errc::InvalidArgument, "scales must be positive");
    require(smax / smin >= 99.0, Errc::InvalidArgument, "scales must span at least two decades");

    // Occupied blocks, ascending.
    std::vector<Interval> blocks;
    {
        size_t pi = 0, ii = 0;
        while (pi < a.points.size() || ii < a.intervals.size()) {
            if (ii == a.intervals.size() ||
                (pi < a.points.size() && a.points[pi] < a.intervals[ii].lo)) {
                blocks.push_back({a.points[pi], a.points[pi]});
                ++pi;
            } else {
                blocks.push_back(a.intervals[ii]);
                ++ii;
            }
        }
    }

    BoxDimFit fit;
    std::vector<double> lx, ly;
    for (double delta : scales) {
        long long prev = std::numeric_limits<long long>::min();
        size_t count = 0;
        for (const Interval& b : blocks) {
            long long k0 = static_cast<long long>(std::floor(b.lo / delta));
            long long k1 = static_cast<long long>(std::floor(b.hi / delta));
            if (k0 <= prev) k0 = prev + 1;
            if (k1 >= k0) count += static_cast<size_t>(k1 - k0 + 1);
            prev = std::max(prev, k1);
        }
        fit.counts.push_back({delta, count});
        lx.push_back(std::log(1.0 / delta));
        ly.push_back(std::log(static_cast<double>(std::max<size_t>(count, 1))));
    }
    LineFit lf = linefit(lx, ly);
    require(lf.slope_stderr <= 0.1, Errc::DegenerateFit, "box-count fit too noisy");
    fit.dimension = lf.slope;
    fit.dim_stderr = lf.slope_stderr;
    return fit;
}

}  // namespace paraset
