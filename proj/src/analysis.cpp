#include "paraset/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace paraset {

namespace {

double grid_step(const VolumeSamples& vs) {
    require(vs.radii.size() >= 2, Errc::InsufficientSamples, "need at least two samples");
    return vs.radii[1] - vs.radii[0];
}

std::size_t index_of(const VolumeSamples& vs, double r) {
    auto it = std::lower_bound(vs.radii.begin(), vs.radii.end(), r - 1e-12);
    require(it != vs.radii.end(), Errc::InvalidArgument, "r beyond the sampled band");
    std::size_t i = static_cast<std::size_t>(it - vs.radii.begin());
    if (i > 0 && std::fabs(vs.radii[i - 1] - r) < std::fabs(vs.radii[i] - r)) --i;
    return i;
}

struct SideFit {
    double slope = 0.0;      // fitted slope evaluated at the query radius
    double resid_max = 0.0;
    double slope_se = 0.0;   // statistical standard error of the slope
};

// Quadratic least squares on abscissae centered at the query radius, so the
// linear coefficient is the slope there; the variance factor comes from the
// normal-equation inverse.
SideFit fit_side(const VolumeSamples& vs, std::size_t from, std::size_t count, double at, int degree) {
    int deg = std::min<int>(degree, static_cast<int>(count) - 1);
    double M[3][3] = {{0}};
    double b[3] = {0};
    const int m = deg + 1;
    for (std::size_t k = 0; k < count; ++k) {
        double t = vs.radii[from + k] - at;
        double pw[3] = {1.0, t, t * t};
        for (int r = 0; r < m; ++r) {
            b[r] += pw[r] * vs.v[from + k];
            for (int c = 0; c < m; ++c) M[r][c] += pw[r] * pw[c];
        }
    }
    // Invert the small SPD system by Gauss-Jordan.
    double inv[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double A[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) A[r][c] = (r < m && c < m) ? M[r][c] : (r == c ? 1.0 : 0.0);
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(inv[col], inv[piv]);
        double d = A[col][col];
        require(std::fabs(d) > 1e-300, Errc::DegenerateFit, "singular window system");
        for (int c = 0; c < 3; ++c) {
            A[col][c] /= d;
            inv[col][c] /= d;
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = A[r][col];
            for (int c = 0; c < 3; ++c) {
                A[r][c] -= f * A[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    double coef[3] = {0, 0, 0};
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) coef[r] += inv[r][c] * b[c];

    SideFit out;
    out.slope = coef[1];
    double ss = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        double t = vs.radii[from + k] - at;
        double p = coef[0] + coef[1] * t + coef[2] * t * t;
        double r = vs.v[from + k] - p;
        out.resid_max = std::max(out.resid_max, std::fabs(r));
        ss += r * r;
    }
    int dof = std::max<int>(1, static_cast<int>(count) - m);
    double sigma2 = ss / dof;
    out.slope_se = std::sqrt(std::max(sigma2 * inv[1][1], 0.0));
    return out;
}

DerivativeEstimate estimate_at(const VolumeSamples& vs, std::size_t i, DerivOptions opt) {
    const int w = opt.window, g = opt.gap;
    require(w >= 4 && g >= 1, Errc::InvalidArgument, "window >= 4 and gap >= 1 required");
    require(i >= static_cast<std::size_t>(w + g), Errc::InsufficientSamples, "left window out of range");
    require(i + w + g < vs.radii.size(), Errc::InsufficientSamples, "right window out of range");
    double r = vs.radii[i];
    SideFit L = fit_side(vs, i - g - w + 1, w, r, opt.degree);
    SideFit R = fit_side(vs, i + g, w, r, opt.degree);
    DerivativeEstimate est;
    est.r = r;
    est.left = L.slope;
    est.right = R.slope;
    est.window = w;
    est.noise = std::max(L.resid_max, R.resid_max);
    est.slope_se = std::hypot(L.slope_se, R.slope_se);
    double step = grid_step(vs);
    // Lattice errors are correlated rather than white, and a kink inside the
    // window tilts the fit by a multiple of the residual scale.
    est.slope_noise = 3.0 * est.slope_se + 12.0 * est.noise / (step * w) + 1e-12;
    return est;
}

double median_abs(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

struct KinkFit {
    double jump = 0.0;
    double sigma = 0.0;
};

// Least squares of V over a symmetric window around the kink with basis
// {1, x, x^2, x^3, u, u^2}, u = max(0, -x): the cubic absorbs the smooth part
// and the hinge pair models a slope jump plus the quadratic hole-closing
// term exactly. jump = left slope - right slope = -coef(u).
KinkFit kink_model_fit(const VolumeSamples& vs, std::size_t i, int half_window, int gap) {
    const int m = 6;
    require(i >= static_cast<std::size_t>(half_window), Errc::InsufficientSamples, "kink window");
    require(i + half_window < vs.radii.size(), Errc::InsufficientSamples, "kink window");
    double r0 = vs.radii[i];
    double M[6][6] = {{0}};
    double b[6] = {0};
    int n = 0;
    auto basis = [&](double x, double* phi) {
        double u = std::max(0.0, -x);
        phi[0] = 1.0;
        phi[1] = x;
        phi[2] = x * x;
        phi[3] = x * x * x;
        phi[4] = u;
        phi[5] = u * u;
    };
    for (int k = -half_window; k <= half_window; ++k) {
        if (std::abs(k) < gap) continue;  // smoothing smears the kink over one cell
        double phi[6];
        basis(vs.radii[i + k] - r0, phi);
        double y = vs.v[i + k];
        for (int r = 0; r < m; ++r) {
            b[r] += phi[r] * y;
            for (int c = 0; c < m; ++c) M[r][c] += phi[r] * phi[c];
        }
        ++n;
    }
    // Solve M c = b and extract (M^{-1})_{44} by Gauss-Jordan with pivoting.
    double A[6][12];
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) {
            A[r][c] = M[r][c];
            A[r][6 + c] = r == c ? 1.0 : 0.0;
        }
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        for (int c = 0; c < 12; ++c) std::swap(A[col][c], A[piv][c]);
        double d = A[col][col];
        require(std::fabs(d) > 1e-300, Errc::DegenerateFit, "singular kink system");
        for (int c = 0; c < 12; ++c) A[col][c] /= d;
        for (int r = 0; r < 6; ++r) {
            if (r == col) continue;
            double f = A[r][col];
            for (int c = 0; c < 12; ++c) A[r][c] -= f * A[col][c];
        }
    }
    double coef[6];
    for (int r = 0; r < 6; ++r) {
        coef[r] = 0.0;
        for (int c = 0; c < 6; ++c) coef[r] += A[r][6 + c] * b[c];
    }
    double ss = 0.0;
    for (int k = -half_window; k <= half_window; ++k) {
        if (std::abs(k) < gap) continue;
        double phi[6];
        basis(vs.radii[i + k] - r0, phi);
        double p = 0.0;
        for (int c = 0; c < m; ++c) p += coef[c] * phi[c];
        double res = vs.v[i + k] - p;
        ss += res * res;
    }
    KinkFit out;
    out.jump = -coef[4];
    double sigma2 = ss / std::max(1, n - m);
    out.sigma = std::sqrt(std::max(0.0, sigma2 * A[4][6 + 4]));
    return out;
}

double hull_distance(Vec2 x, const std::vector<Vec2>& pts) {
    if (pts.size() == 1) return dist(x, pts[0]);
    if (pts.size() == 2) {
        Vec2 d = pts[1] - pts[0];
        double L2 = d.norm2();
        double t = L2 > 0 ? std::clamp((x - pts[0]).dot(d) / L2, 0.0, 1.0) : 0.0;
        return dist(x, {pts[0].x + t * d.x, pts[0].y + t * d.y});
    }
    // Monotone-chain hull for small point sets.
    std::vector<Vec2> p = pts;
    std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    auto cross = [](Vec2 o, Vec2 a, Vec2 b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Vec2> hull;
    for (int pass = 0; pass < 2; ++pass) {
        std::size_t start = hull.size();
        for (const Vec2& q : p) {
            while (hull.size() >= start + 2 && cross(hull[hull.size() - 2], hull.back(), q) <= 0)
                hull.pop_back();
            hull.push_back(q);
        }
        hull.pop_back();
        std::reverse(p.begin(), p.end());
    }
    if (hull.size() < 3) return hull_distance(x, std::vector<Vec2>(p.begin(), p.begin() + 2));
    bool inside = true;
    double edge_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        Vec2 a = hull[i], b = hull[(i + 1) % hull.size()];
        if (cross(a, b, x) < 0) inside = false;
        Vec2 d = b - a;
        double L2 = d.norm2();
        double t = L2 > 0 ? std::clamp((x - a).dot(d) / L2, 0.0, 1.0) : 0.0;
        edge_min = std::min(edge_min, dist(x, {a.x + t * d.x, a.y + t * d.y}));
    }
    return inside ? 0.0 : edge_min;
}

}  // namespace

DerivativeEstimate one_sided_derivatives(const VolumeSamples& vs, double r, DerivOptions opt) {
    return estimate_at(vs, index_of(vs, r), opt);
}

NondiffReport detect_nondiff(const VolumeSamples& vs, double threshold,
                             const std::vector<double>& predicted, double match_tol,
                             DerivOptions opt) {
    NondiffReport rep;
    rep.predicted = predicted;
    double step = grid_step(vs);
    rep.resolution = step;
    const std::size_t lo = opt.window + opt.gap;
    require(vs.radii.size() > 2 * lo + 2, Errc::InsufficientSamples, "band too short for detection");
    const std::size_t hi = vs.radii.size() - lo - 1;

    DerivOptions fine = opt;
    fine.window = opt.window_fine;
    DerivOptions mid = opt;
    mid.window = std::max(opt.window_fine, opt.window / 2);

    std::vector<double> jumps(vs.radii.size(), 0.0);
    std::vector<double> ses(vs.radii.size(), 0.0);
    for (std::size_t i = lo; i <= hi; ++i) {
        DerivativeEstimate e = estimate_at(vs, i, fine);
        jumps[i] = e.jump();
        ses[i] = e.slope_se;
    }
    std::vector<double> abs_j(jumps.begin() + lo, jumps.begin() + hi + 1);
    double med = median_abs(abs_j);
    for (double& a : abs_j) a = std::fabs(a - med);
    rep.noise_floor = 1.4826 * median_abs(abs_j) + 1e-15;
    rep.threshold = threshold > 0.0 ? threshold : 4.0 * rep.noise_floor;
    // Band-wide statistical scale; the local se inflates where the local
    // model is wrong, which is exactly where the scale test must stay tight.
    double median_se = median_abs(std::vector<double>(ses.begin() + lo, ses.begin() + hi + 1));

    const std::size_t dominate = opt.window_fine / 2 + opt.gap;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        if (jumps[i] <= rep.threshold) continue;
        if (jumps[i] < jumps[i - 1] || jumps[i] < jumps[i + 1]) continue;
        bool dominated = false;
        for (std::size_t k = 1; k <= dominate; ++k) {
            if (i >= k && jumps[i - k] > jumps[i]) dominated = true;
            if (i + k <= hi && jumps[i + k] > jumps[i]) dominated = true;
        }
        if (dominated) continue;

        double denom = jumps[i - 1] - 2.0 * jumps[i] + jumps[i + 1];
        double dr = denom < -1e-300 ? 0.5 * (jumps[i - 1] - jumps[i + 1]) / denom * step : 0.0;
        dr = std::clamp(dr, -step, step);

        Detection det;
        det.r = vs.radii[i] + dr;
        // Scale consistency: widening the window must not grow the statistic
        // beyond the fine-scale value (up to noise).
        double coarse = jumps[i];
        for (const DerivOptions* o : {&mid, &opt}) {
            DerivativeEstimate ec = estimate_at(vs, i, *o);
            coarse = std::max(coarse, ec.jump());
        }
        det.scale_consistency = jumps[i] / coarse;
        // Hinge placement and window chosen by the residual scale, so nearby
        // smooth singularities fall outside the selected fit.
        KinkFit kf;
        kf.sigma = std::numeric_limits<double>::infinity();
        for (int off : {-1, 0, 1}) {
            for (int hw : {10, 16, opt.window}) {
                std::size_t ic = i + off;
                if (ic < static_cast<std::size_t>(hw) || ic + hw >= vs.radii.size()) continue;
                KinkFit t = kink_model_fit(vs, ic, hw, opt.gap);
                if (t.sigma < kf.sigma) kf = t;
            }
        }
        det.jump = kf.jump;
        det.jump_sigma = kf.sigma;
        bool scale_ok = jumps[i] >= 0.85 * coarse - 3.0 * median_se;
        bool magnitude_ok = kf.jump >= rep.threshold;
        if (scale_ok && magnitude_ok) {
            rep.detected.push_back(det);
        } else {
            rep.rejected_smooth.push_back(det);
        }
    }

    // A kink sitting inside the excluded gap produces a plateau of equal
    // maxima; collapse runs of detections into their midpoint.
    const double merge_radius = (2.0 * opt.gap + 2.0) * step;
    std::vector<Detection> merged;
    for (std::size_t k = 0; k < rep.detected.size();) {
        std::size_t j = k;
        while (j + 1 < rep.detected.size() &&
               rep.detected[j + 1].r - rep.detected[j].r <= merge_radius)
            ++j;
        Detection best = rep.detected[k];
        for (std::size_t t = k; t <= j; ++t)
            if (rep.detected[t].jump > best.jump) best = rep.detected[t];
        best.r = 0.5 * (rep.detected[k].r + rep.detected[j].r);
        merged.push_back(best);
        k = j + 1;
    }
    rep.detected = std::move(merged);

    double mtol = match_tol > 0.0 ? match_tol : 2.0 * step;
    std::vector<bool> used(rep.detected.size(), false);
    for (double p : predicted) {
        bool hit = false;
        for (std::size_t k = 0; k < rep.detected.size(); ++k) {
            if (!used[k] && std::fabs(rep.detected[k].r - p) <= mtol) {
                used[k] = true;
                hit = true;
                break;
            }
        }
        (hit ? rep.matched : rep.missed).push_back(p);
    }
    for (std::size_t k = 0; k < rep.detected.size(); ++k)
        if (!predicted.empty() && !used[k]) rep.spurious.push_back(rep.detected[k].r);
    return rep;
}

KneserReport kneser_check(const VolumeSamples& vs, int dim, double tol) {
    KneserReport rep;
    double step = grid_step(vs);
    // Radii grids are integer multiples of the step, so index arithmetic keeps
    // lambda * r exactly on the grid for lambda in {1, 5/4, 3/2, 2}.
    long base = std::lround(vs.radii[0] / step);
    require(std::fabs(base * step - vs.radii[0]) < 1e-9 * step, Errc::InvalidArgument,
            "radii grid must be aligned to multiples of its step");
    const long n = static_cast<long>(vs.radii.size());
    auto value_at_index = [&](long idx) -> const double* {
        long k = idx - base;
        if (k < 0 || k >= n) return nullptr;
        return &vs.v[static_cast<std::size_t>(k)];
    };
    auto err_at_index = [&](long idx) {
        long k = idx - base;
        return vs.err[static_cast<std::size_t>(k)];
    };

    const std::pair<long, long> lambdas[] = {{1, 1}, {5, 4}, {3, 2}, {2, 1}};
    long stride = std::max<long>(4, n / 48);
    stride += (4 - stride % 4) % 4;  // keep indices divisible by 4
    long first = ((base + 3) / 4) * 4;
    double budget = tol;
    for (long ia = first; ia < base + n; ia += stride) {
        for (long ib = ia + stride; ib < base + n; ib += stride) {
            for (auto [num, den] : lambdas) {
                long la = ia * num / den, lb = ib * num / den;
                if (ia * num % den || ib * num % den) continue;
                const double* fa = value_at_index(ia);
                const double* fb = value_at_index(ib);
                const double* fla = value_at_index(la);
                const double* flb = value_at_index(lb);
                if (!fa || !fb || !fla || !flb) continue;
                double lambda = static_cast<double>(num) / den;
                double scale = std::pow(lambda, dim);
                double violation = (*flb - *fla) - scale * (*fb - *fa);
                double allow =
                    3.0 * (err_at_index(la) + err_at_index(lb) + scale * (err_at_index(ia) + err_at_index(ib)));
                budget = std::max(budget, allow);
                rep.worst_violation = std::max(rep.worst_violation, violation);
                ++rep.checked;
            }
        }
    }
    require(rep.checked > 0, Errc::InsufficientSamples, "no Kneser triples in range");
    rep.allowance = budget + 1e-9 * std::max(1.0, std::fabs(vs.v.back()));
    rep.pass = rep.worst_violation <= rep.allowance;
    return rep;
}

ContinuityReport derivative_continuity_check(const VolumeSamples& vs, double r0, double delta,
                                             int kmax, double tol,
                                             const std::vector<double>& known_jumps,
                                             DerivOptions opt) {
    ContinuityReport rep;
    double step = grid_step(vs);
    double guard = (opt.window + opt.gap + 2) * step;
    for (double j : known_jumps)
        if (std::fabs(j - r0) < guard + delta) {
            rep.applicable = false;
            return rep;
        }
    DerivativeEstimate center = one_sided_derivatives(vs, r0, opt);
    rep.central = 0.5 * (center.left + center.right);
    double worst_final = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        double off = delta * std::pow(2.0, -k);
        if (off < 2 * step) break;
        DerivativeEstimate lo = one_sided_derivatives(vs, r0 - off, opt);
        DerivativeEstimate hi = one_sided_derivatives(vs, r0 + off, opt);
        double dev = std::max({std::fabs(lo.left - rep.central), std::fabs(lo.right - rep.central),
                               std::fabs(hi.left - rep.central), std::fabs(hi.right - rep.central)});
        rep.deviations.push_back(dev);
        worst_final = dev;
    }
    require(!rep.deviations.empty(), Errc::InsufficientSamples, "schedule collapsed below grid step");
    rep.converged = worst_final <= tol * (std::fabs(rep.central) + 1.0);
    return rep;
}

bool is_critical(const Geometry2D& g, Vec2 x, double tol_multi, double tol_hull) {
    if (g.contains(x)) return false;
    ProjectionRecord rec = g.project(x, tol_multi);
    if (rec.multiplicity < 2) return false;
    return hull_distance(x, rec.nearest) <= tol_hull;
}

CriticalValueScan scan_critical_values(const Geometry2D& g, const DistanceField& f,
                                       double cluster_tol, bool axis_only, int audit_samples,
                                       std::uint64_t seed) {
    const GridSpec& gr = f.grid;
    const double h = gr.h;
    // Analytic projections resolve the hull test exactly; only grid-sourced
    // fields need the resolution-scaled tolerance.
    const double tol_hull = f.source == FieldSource::Exact ? 1e-9 : 2.0 * h;
    std::vector<double> found;
    auto visit = [&](int i, int j) {
        double d = f.values[gr.idx(i, j)];
        if (d < f.trusted_min || d > f.trusted_max) return;
        Vec2 x = gr.center(i, j);
        if (is_critical(g, x, 1e-9, tol_hull)) found.push_back(d);
    };
    if (axis_only) {
        long j_axis = -gr.iy0;
        require(j_axis >= 0 && j_axis < gr.ny, Errc::InvalidArgument, "axis row outside the grid");
        for (int i = 0; i < gr.nx; ++i) visit(i, static_cast<int>(j_axis));
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> di(0, gr.nx - 1), dj(0, gr.ny - 1);
        for (int k = 0; k < audit_samples; ++k) visit(di(rng), dj(rng));
    } else {
        for (int j = 0; j < gr.ny; ++j)
            for (int i = 0; i < gr.nx; ++i) visit(i, j);
    }
    CriticalValueScan scan;
    scan.critical_samples = found.size();
    std::sort(found.begin(), found.end());
    for (std::size_t i = 0; i < found.size();) {
        std::size_t j = i;
        while (j + 1 < found.size() && found[j + 1] - found[j] <= cluster_tol) ++j;
        scan.values.push_back(0.5 * (found[i] + found[j]));
        i = j + 1;
    }
    return scan;
}

CriticalityReport characterize_differentiability(const Geometry2D& g, const DistanceField& f,
                                                 double r, double c, int offset_cells) {
    const double h = f.grid.h;
    CriticalityReport rep;
    rep.r = r;
    double r_eval = r - offset_cells * h;
    require(r_eval > f.trusted_min - 1e-12, Errc::RadiusOutOfBand, "r too close to the band floor");
    SurfaceCloud cloud = extract_level_set(f, r_eval);

    const double probe_hi = std::min(r + 6.0 * h, f.trusted_max);
    const double mult_tol = 1e-7 * std::max(1.0, r);
    const double hull_tol = f.source == FieldSource::Exact ? 1e-7 * std::max(1.0, r) : 2.0 * h;

    auto dist_to_set = [&](Vec2 p) {
        if (f.source == FieldSource::Exact) return g.exact_distance(p);
        return f.value_at(p);
    };
    std::vector<double> critical_levels;

    for (std::size_t k = 0; k < cloud.points.size(); ++k) {
        double w = cloud.weights[k];
        rep.total_mass += w;
        ProjectionRecord rec = project_any(g, &f, cloud.points[k], 1e-9);
        if (rec.multiplicity >= 2) {
            // Already on the exoskeleton at the evaluation level.
            ++rep.multi;
            rep.non_unp_mass += 0.5 * w;
            if (hull_distance(cloud.points[k], rec.nearest) <= hull_tol) {
                ++rep.critical;
                rep.critical_mass += 0.5 * w;
                critical_levels.push_back(rec.distance);
            }
            continue;
        }
        Vec2 a = rec.nearest[0];
        Vec2 u = rec.directions[0];
        // Largest t with d(a + t u) = t: where the projection ray dies.
        double lo = rec.distance, hi = probe_hi;
        double tol_probe = f.source == FieldSource::Exact ? 1e-9 : 0.25 * h;
        auto alive = [&](double t) {
            Vec2 p{a.x + t * u.x, a.y + t * u.y};
            return dist_to_set(p) >= t - tol_probe;
        };
        if (alive(hi)) {
            ++rep.unique_nearest;  // ray continues past the probed band
            continue;
        }
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            (alive(mid) ? lo : hi) = mid;
        }
        double t_star = lo;
        if (t_star > r + 4.0 * h || t_star < r - 4.0 * h) {
            ++rep.unique_nearest;  // the opposing sheet belongs to another radius
            continue;
        }
        Vec2 yhat{a.x + t_star * u.x, a.y + t_star * u.y};
        ProjectionRecord rec2 = project_any(g, &f, yhat, mult_tol);
        if (rec2.multiplicity >= 2) {
            ++rep.multi;
            rep.non_unp_mass += 0.5 * w;
            if (hull_distance(yhat, rec2.nearest) <= hull_tol) {
                ++rep.critical;
                rep.critical_mass += 0.5 * w;
                critical_levels.push_back(t_star);
            }
        } else {
            ++rep.unique_nearest;
        }
    }

    if (!critical_levels.empty()) {
        std::nth_element(critical_levels.begin(),
                         critical_levels.begin() + critical_levels.size() / 2,
                         critical_levels.end());
        rep.critical_level = critical_levels[critical_levels.size() / 2];
    }
    // The hull test is exact for analytic projections, so differentiable radii
    // produce (near-)zero critical mass; a few cells of contour weight
    // separate that from any genuine critical sheet.
    rep.critical_threshold = c * h;
    // The non-Unp estimate near tangencies resolves only to sqrt(h) scale.
    rep.non_unp_threshold = std::max(rep.critical_threshold, 8.0 * std::sqrt(h * std::max(r, h)));
    rep.differentiable =
        rep.critical_mass <= rep.critical_threshold && rep.non_unp_mass <= rep.non_unp_threshold;
    return rep;
}

double surface_jump_estimate(const Geometry2D& g, const DistanceField& f, double r) {
    double m2 = characterize_differentiability(g, f, r, 8.0, 2).critical_mass;
    double m4 = characterize_differentiability(g, f, r, 8.0, 4).critical_mass;
    return 2.0 * (2.0 * m2 - m4);
}

NondiffReport detect_nondiff_verified(const Geometry2D& g, const DistanceField& f,
                                      const VolumeSamples& vs, double threshold,
                                      const std::vector<double>& predicted, double match_tol,
                                      DerivOptions opt) {
    NondiffReport raw = detect_nondiff(vs, threshold, {}, 0.0, opt);
    NondiffReport rep;
    rep.threshold = raw.threshold;
    rep.noise_floor = raw.noise_floor;
    rep.resolution = raw.resolution;
    rep.predicted = predicted;

    std::vector<Detection> pool = raw.detected;
    pool.insert(pool.end(), raw.rejected_smooth.begin(), raw.rejected_smooth.end());
    std::sort(pool.begin(), pool.end(), [](const Detection& a, const Detection& b) { return a.r < b.r; });
    const double h = f.grid.h;
    for (const Detection& cand : pool) {
        CriticalityReport cr = characterize_differentiability(g, f, cand.r);
        if (cr.differentiable) {
            rep.rejected_smooth.push_back(cand);
            continue;
        }
        Detection det = cand;
        // The critical samples' ray-death levels locate the sheet radius far
        // more sharply than the windowed statistic; re-measure there so the
        // cap-term extrapolation is centered correctly.
        if (cr.critical_level > f.trusted_min + 6.0 * h &&
            cr.critical_level < f.trusted_max - 6.0 * h &&
            std::fabs(cr.critical_level - cand.r) <= 4.0 * h) {
            det.r = cr.critical_level;
        }
        det.jump = surface_jump_estimate(g, f, det.r);
        if (det.jump < rep.threshold) {
            rep.rejected_smooth.push_back(cand);
            continue;
        }
        // Merge duplicates pointing at the same sheet.
        if (!rep.detected.empty() && std::fabs(rep.detected.back().r - det.r) < 6.0 * rep.resolution) {
            if (det.jump > rep.detected.back().jump) rep.detected.back() = det;
            continue;
        }
        rep.detected.push_back(det);
    }

    double mtol = match_tol > 0.0 ? match_tol : 2.0 * rep.resolution;
    std::vector<bool> used(rep.detected.size(), false);
    for (double p : predicted) {
        bool hit = false;
        for (std::size_t k = 0; k < rep.detected.size(); ++k) {
            if (!used[k] && std::fabs(rep.detected[k].r - p) <= mtol) {
                used[k] = true;
                hit = true;
                break;
            }
        }
        (hit ? rep.matched : rep.missed).push_back(p);
    }
    for (std::size_t k = 0; k < rep.detected.size(); ++k)
        if (!predicted.empty() && !used[k]) rep.spurious.push_back(rep.detected[k].r);
    return rep;
}

double flat_distance(const SurfaceCloud& mu, const SurfaceCloud& nu, TentDictionary dict) {
    require(!mu.points.empty() && !nu.points.empty(), Errc::EmptyCloud, "empty cloud");
    require(dict.rho > 0.0 && dict.spacing > 0.0, Errc::InvalidArgument, "bad dictionary");
    std::map<std::pair<long, long>, double> acc;
    auto add = [&](const SurfaceCloud& cl, double sign) {
        for (std::size_t k = 0; k < cl.points.size(); ++k) {
            Vec2 p = cl.points[k];
            double w = sign * cl.weights[k];
            long i0 = static_cast<long>(std::ceil((p.x - dict.rho) / dict.spacing));
            long i1 = static_cast<long>(std::floor((p.x + dict.rho) / dict.spacing));
            long j0 = static_cast<long>(std::ceil((p.y - dict.rho) / dict.spacing));
            long j1 = static_cast<long>(std::floor((p.y + dict.rho) / dict.spacing));
            for (long i = i0; i <= i1; ++i)
                for (long j = j0; j <= j1; ++j) {
                    double dd = std::hypot(p.x - i * dict.spacing, p.y - j * dict.spacing);
                    if (dd >= dict.rho) continue;
                    acc[{i, j}] += w * (1.0 - dd / dict.rho);
                }
        }
    };
    add(mu, 1.0);
    add(nu, -1.0);
    double best = std::fabs(mu.total_mass() - nu.total_mass());  // constant test function
    for (const auto& [key, v] : acc) best = std::max(best, std::fabs(v));
    return best;
}

ConvergenceReport weak_convergence_report(const Geometry2D& g, const DistanceField& f, double r0,
                                          double delta, int kmax) {
    (void)g;
    require(kmax >= 2, Errc::InvalidArgument, "kmax must be >= 2");
    const double h = f.grid.h;
    TentDictionary dict{4.0 * h, 2.0 * h};
    ConvergenceReport rep;
    rep.r0 = r0;
    SurfaceCloud base = extract_level_set(f, r0);
    rep.mass_r0 = base.total_mass();
    for (int k = 1; k <= kmax; ++k) {
        double off = delta * std::pow(2.0, -k);
        ConvergenceRow row;
        row.k = k;
        row.r_below = r0 - off;
        row.r_above = r0 + off;
        SurfaceCloud below = extract_level_set(f, row.r_below);
        SurfaceCloud above = extract_level_set(f, row.r_above);
        row.flat_below = flat_distance(below, base, dict);
        row.flat_above = flat_distance(above, base, dict);
        row.mass_below = below.total_mass();
        row.mass_above = above.total_mass();
        rep.rows.push_back(row);
    }
    auto eventually_decreasing = [&](auto&& get) {
        for (std::size_t k0 = 0; k0 + 2 < rep.rows.size(); ++k0) {
            bool ok = true;
            for (std::size_t k = k0; k + 1 < rep.rows.size(); ++k)
                if (get(rep.rows[k + 1]) > get(rep.rows[k]) * (1.0 + 1e-9)) ok = false;
            if (ok) return true;
        }
        return false;
    };
    rep.eventually_decreasing_below =
        eventually_decreasing([](const ConvergenceRow& r) { return r.flat_below; });
    rep.eventually_decreasing_above =
        eventually_decreasing([](const ConvergenceRow& r) { return r.flat_above; });
    rep.final_flat_below = rep.rows.back().flat_below;
    rep.final_flat_above = rep.rows.back().flat_above;
    rep.final_mass_gap = std::fabs(rep.rows.back().mass_below - rep.rows.back().mass_above);
    return rep;
}

}  // namespace paraset
