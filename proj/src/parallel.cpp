#include "paraset/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace paraset {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t memory_budget() {
    if (const char* env = std::getenv("PARASET_MEM_BUDGET")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t(2) * 1024 * 1024 * 1024;
}

void parallel_rows(int ny, const std::function<void(int, int)>& fn) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || ny < 64) {
        fn(0, ny);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (ny + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
        int j0 = static_cast<int>(w) * chunk;
        int j1 = std::min(ny, j0 + chunk);
        if (j0 >= j1) break;
        pool.emplace_back(fn, j0, j1);
    }
    for (auto& t : pool) t.join();
}

// 1D squared distance transform, lower envelope of parabolas.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s;
        while (true) {
            if (f[v[k]] == kInf) {
                // no finite parabola yet
                if (k == 0) {
                    v[0] = q;
                    z[0] = -kInf;
                    z[1] = kInf;
                    s = -kInf;
                    break;
                }
                --k;
                continue;
            }
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
                continue;
            }
            break;
        }
        if (s != -kInf) {
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kInf;
        }
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double fv = f[v[k]];
        d[q] = fv == kInf ? kInf : (q - v[k]) * (q - v[k]) + fv;
    }
}

bool geometry_supports_exact(const Geometry2D& g) {
    Rect b = g.bounding_box();
    for (Vec2 p : {b.center(), Vec2{b.xmin - 1.0, b.ymin - 1.0}, Vec2{b.xmax + 1.0, b.ymax + 1.0}}) {
        try {
            (void)g.exact_distance(p);
        } catch (const Error& e) {
            if (e.code() == Errc::UnsupportedShape) return false;
            throw;
        }
    }
    return true;
}

std::vector<double> sorted_values_in_band(const DistanceField& f) {
    std::vector<double> s(f.values);
    std::sort(s.begin(), s.end());
    return s;
}

std::size_t count_below(const std::vector<double>& sorted, double r) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), r) - sorted.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid and fields
// ---------------------------------------------------------------------------

GridSpec GridSpec::covering(const Rect& box, double h) {
    require(h > 0.0, Errc::InvalidArgument, "h must be positive");
    GridSpec g;
    g.h = h;
    g.ix0 = static_cast<long>(std::floor(box.xmin / h));
    g.iy0 = static_cast<long>(std::floor(box.ymin / h));
    g.nx = static_cast<int>(std::ceil(box.xmax / h)) - static_cast<int>(g.ix0) + 1;
    g.ny = static_cast<int>(std::ceil(box.ymax / h)) - static_cast<int>(g.iy0) + 1;
    require(g.nx > 0 && g.ny > 0, Errc::InvalidArgument, "empty grid box");
    require(g.size() * 16 <= memory_budget(), Errc::GridTooLarge,
            "grid exceeds the configured memory budget (PARASET_MEM_BUDGET)");
    return g;
}

double DistanceField::value_at(Vec2 p) const {
    double fx = p.x / grid.h - grid.ix0;
    double fy = p.y / grid.h - grid.iy0;
    int i = std::clamp(static_cast<int>(std::floor(fx)), 0, grid.nx - 2);
    int j = std::clamp(static_cast<int>(std::floor(fy)), 0, grid.ny - 2);
    double tx = std::clamp(fx - i, 0.0, 1.0);
    double ty = std::clamp(fy - j, 0.0, 1.0);
    double v00 = values[grid.idx(i, j)], v10 = values[grid.idx(i + 1, j)];
    double v01 = values[grid.idx(i, j + 1)], v11 = values[grid.idx(i + 1, j + 1)];
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

Bitmap rasterize_membership(const Geometry2D& g, const Rect& box, double h) {
    Bitmap bm;
    bm.grid = GridSpec::covering(box, h);
    bm.occupied.assign(bm.grid.size(), 0);

    parallel_rows(bm.grid.ny, [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j)
            for (int i = 0; i < bm.grid.nx; ++i)
                if (g.contains(bm.grid.center(i, j))) bm.occupied[bm.grid.idx(i, j)] = 1;
    });

    // Sub-cell boundary sampling keeps measure-zero pieces representable.
    const double step = h / 4.0;
    auto mark = [&](Vec2 p) {
        if (!g.contains(p)) return;
        long i = std::lround(p.x / h) - bm.grid.ix0;
        long j = std::lround(p.y / h) - bm.grid.iy0;
        if (i >= 0 && i < bm.grid.nx && j >= 0 && j < bm.grid.ny)
            bm.occupied[bm.grid.idx(static_cast<int>(i), static_cast<int>(j))] = 1;
    };
    for (const BoundaryCurve& c : g.boundary_curves()) {
        if (const auto* seg = std::get_if<SegmentCurve>(&c)) {
            double len = dist(seg->a, seg->b);
            int n = std::max(1, static_cast<int>(std::ceil(len / step)));
            for (int k = 0; k <= n; ++k) {
                double t = static_cast<double>(k) / n;
                mark({seg->a.x + t * (seg->b.x - seg->a.x), seg->a.y + t * (seg->b.y - seg->a.y)});
            }
        } else {
            const auto& arc = std::get<ArcCurve>(c);
            double len = arc.radius * (arc.theta1 - arc.theta0);
            int n = std::max(1, static_cast<int>(std::ceil(len / step)));
            for (int k = 0; k <= n; ++k) {
                double th = arc.theta0 + (arc.theta1 - arc.theta0) * k / n;
                mark({arc.center.x + arc.radius * std::cos(th),
                      arc.center.y + arc.radius * std::sin(th)});
            }
        }
    }
    for (std::uint8_t b : bm.occupied) bm.count += b;
    return bm;
}

DistanceField distance_transform(const Bitmap& bm) {
    require(bm.count > 0, Errc::EmptySet, "empty bitmap");
    const GridSpec& gr = bm.grid;
    DistanceField f;
    f.grid = gr;
    f.source = FieldSource::Grid;
    f.values.assign(gr.size(), kInf);
    for (std::size_t i = 0; i < gr.size(); ++i)
        if (bm.occupied[i]) f.values[i] = 0.0;

    // Columns, then rows.
    parallel_rows(gr.nx, [&](int i0, int i1) {
        std::vector<double> col(gr.ny), out(gr.ny), z(gr.ny + 1);
        std::vector<int> v(gr.ny);
        for (int i = i0; i < i1; ++i) {
            for (int j = 0; j < gr.ny; ++j) col[j] = f.values[gr.idx(i, j)];
            edt_1d(col, out, v, z);
            for (int j = 0; j < gr.ny; ++j) f.values[gr.idx(i, j)] = out[j];
        }
    });
    parallel_rows(gr.ny, [&](int j0, int j1) {
        std::vector<double> row(gr.nx), out(gr.nx), z(gr.nx + 1);
        std::vector<int> v(gr.nx);
        for (int j = j0; j < j1; ++j) {
            for (int i = 0; i < gr.nx; ++i) row[i] = f.values[gr.idx(i, j)];
            edt_1d(row, out, v, z);
            for (int i = 0; i < gr.nx; ++i) f.values[gr.idx(i, j)] = std::sqrt(out[i]) * gr.h;
        }
    });
    return f;
}

DistanceField make_distance_field(const Geometry2D& g, double h, double r_max) {
    require(h > 0.0 && r_max > 2.0 * h, Errc::InvalidArgument, "need r_max > 2h");
    Rect box = g.bounding_box().inflated(r_max + 4.0 * h);
    if (geometry_supports_exact(g)) {
        DistanceField f;
        f.grid = GridSpec::covering(box, h);
        f.source = FieldSource::Exact;
        f.values.assign(f.grid.size(), 0.0);
        parallel_rows(f.grid.ny, [&](int j0, int j1) {
            for (int j = j0; j < j1; ++j)
                for (int i = 0; i < f.grid.nx; ++i)
                    f.values[f.grid.idx(i, j)] = g.exact_distance(f.grid.center(i, j));
        });
        f.trusted_min = 2.0 * h;
        f.trusted_max = r_max;
        return f;
    }
    Bitmap bm = rasterize_membership(g, box, h);
    DistanceField f = distance_transform(bm);
    f.trusted_min = 2.0 * h;
    f.trusted_max = r_max;
    return f;
}

// ---------------------------------------------------------------------------
// Volume
// ---------------------------------------------------------------------------

std::vector<double> radii_grid(double lo, double hi, double step) {
    require(step > 0.0 && hi > lo, Errc::InvalidArgument, "bad radii grid");
    std::vector<double> r;
    for (long i = static_cast<long>(std::ceil(lo / step)); i * step <= hi + 1e-15; ++i)
        r.push_back(i * step);
    require(r.size() >= 2, Errc::InvalidArgument, "radii grid too small");
    return r;
}

VolumeSamples volume_function(const DistanceField& f, const std::vector<double>& radii,
                              bool smoothed) {
    require(!radii.empty(), Errc::InvalidArgument, "no radii");
    for (double r : radii)
        require(r >= f.trusted_min - 1e-12 && r <= f.trusted_max + 1e-12, Errc::RadiusOutOfBand,
                "radius outside the trusted band");
    std::vector<double> sorted = sorted_values_in_band(f);
    std::vector<double> prefix(sorted.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i];

    VolumeSamples vs;
    vs.source = f.source;
    vs.radii = radii;
    const double h = f.grid.h;
    const double cell = h * h;
    for (double r : radii) {
        double v;
        if (smoothed) {
            // Cell-width average of the counting volume: axis-aligned facets
            // put whole rows of cells at identical distances, and the window
            // of width h integrates that sawtooth out exactly. Differs from
            // the raw count by at most one shell, which is inside err.
            std::size_t lo = count_below(sorted, r - 0.5 * h);
            std::size_t hi = count_below(sorted, r + 0.5 * h);
            double partial = ((r + 0.5 * h) * static_cast<double>(hi - lo) -
                              (prefix[hi] - prefix[lo])) / h;
            v = cell * (static_cast<double>(lo) + partial);
        } else {
            v = cell * static_cast<double>(count_below(sorted, r));
        }
        vs.v.push_back(v);
        double hi_r = std::min(r + h, f.trusted_max + h);
        double lo_r = std::max(r - h, 0.0);
        double shell = static_cast<double>(count_below(sorted, hi_r) - count_below(sorted, lo_r));
        double contour = shell * cell / (hi_r - lo_r);
        vs.err.push_back(contour * h + cell);
    }
    return vs;
}

double volume_1d_exact(const Set1D& a, double r) {
    require(r >= 0.0, Errc::InvalidArgument, "r must be nonnegative");
    a.validate();
    double total = 2.0 * r;
    for (const Interval& iv : a.intervals) total += iv.length();
    for (double g : a.gap_lengths()) total += std::min(2.0 * r, g);
    return total;
}

VolumeSamples volume_samples_1d(const Set1D& a, const std::vector<double>& radii) {
    VolumeSamples vs;
    vs.source = FieldSource::Exact;
    vs.radii = radii;
    for (double r : radii) {
        vs.v.push_back(volume_1d_exact(a, r));
        vs.err.push_back(0.0);
    }
    return vs;
}

Sided volume_1d_derivatives(const Set1D& a, double r) {
    require(r > 0.0, Errc::InvalidArgument, "r must be positive");
    Sided s;
    s.left = 2.0;
    s.right = 2.0;
    for (double g : a.gap_lengths()) {
        if (g >= 2.0 * r) s.left += 2.0;
        if (g > 2.0 * r) s.right += 2.0;
    }
    return s;
}

double exact_volume_oracle(OracleKind kind, const std::vector<double>& params, double r) {
    require(r >= 0.0, Errc::InvalidArgument, "r must be nonnegative");
    switch (kind) {
        case OracleKind::Disk: {
            require(params.size() == 1 && params[0] > 0.0, Errc::InvalidArgument, "disk needs {radius}");
            double R = params[0] + r;
            return kPi * R * R;
        }
        case OracleKind::TwoPoints: {
            require(params.size() == 1 && params[0] > 0.0, Errc::InvalidArgument,
                    "two_points needs {distance}");
            double d = params[0];
            double v = 2.0 * kPi * r * r;
            if (2.0 * r > d) {
                double lens = 2.0 * r * r * std::acos(d / (2.0 * r)) -
                              0.5 * d * std::sqrt(4.0 * r * r - d * d);
                v -= lens;
            }
            return v;
        }
        case OracleKind::RectBoundary: {
            require(params.size() == 1 && params[0] > 0.0, Errc::InvalidArgument,
                    "rect_boundary needs {s}");
            double s = params[0];
            double inner = 6.0 * s * s -
                           std::max(0.0, 3.0 * s - 2.0 * r) * std::max(0.0, 2.0 * s - 2.0 * r);
            return inner + 10.0 * s * r + kPi * r * r;
        }
        case OracleKind::IntervalUnion1D: {
            require(params.size() >= 1, Errc::InvalidArgument, "interval_union_1d needs points");
            Set1D a;
            a.points = params;
            std::sort(a.points.begin(), a.points.end());
            return volume_1d_exact(a, r);
        }
    }
    fail(Errc::UnknownKind, "unknown oracle kind");
}

// ---------------------------------------------------------------------------
// Level sets
// ---------------------------------------------------------------------------

double SurfaceCloud::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

SurfaceCloud extract_level_set(const DistanceField& f, double r) {
    require(r > 2.0 * f.grid.h, Errc::RadiusOutOfBand, "r must exceed 2h");
    require(r >= f.trusted_min - 1e-12 && r <= f.trusted_max + 1e-12, Errc::RadiusOutOfBand,
            "radius outside the trusted band");
    SurfaceCloud cloud;
    cloud.r = r;
    const GridSpec& gr = f.grid;

    auto corner = [&](int i, int j) { return gr.center(i, j); };
    auto val = [&](int i, int j) { return f.values[gr.idx(i, j)]; };

    for (int j = 0; j + 1 < gr.ny; ++j) {
        for (int i = 0; i + 1 < gr.nx; ++i) {
            double v0 = val(i, j), v1 = val(i + 1, j), v2 = val(i + 1, j + 1), v3 = val(i, j + 1);
            int mask = (v0 < r ? 1 : 0) | (v1 < r ? 2 : 0) | (v2 < r ? 4 : 0) | (v3 < r ? 8 : 0);
            if (mask == 0 || mask == 15) continue;
            Vec2 p0 = corner(i, j), p1 = corner(i + 1, j), p2 = corner(i + 1, j + 1),
                 p3 = corner(i, j + 1);
            auto edge_point = [&](int e) -> Vec2 {
                Vec2 a, b;
                double va, vb;
                switch (e) {
                    case 0: a = p0; b = p1; va = v0; vb = v1; break;
                    case 1: a = p1; b = p2; va = v1; vb = v2; break;
                    case 2: a = p2; b = p3; va = v2; vb = v3; break;
                    default: a = p3; b = p0; va = v3; vb = v0; break;
                }
                double t = (r - va) / (vb - va);
                t = std::clamp(t, 0.0, 1.0);
                return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            };
            auto emit = [&](int ea, int eb) {
                Vec2 a = edge_point(ea), b = edge_point(eb);
                double w = dist(a, b);
                if (w < 1e-300) return;
                cloud.points.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
                cloud.weights.push_back(w);
            };
            switch (mask) {
                case 1: emit(3, 0); break;
                case 2: emit(0, 1); break;
                case 3: emit(3, 1); break;
                case 4: emit(1, 2); break;
                case 6: emit(0, 2); break;
                case 7: emit(3, 2); break;
                case 8: emit(2, 3); break;
                case 9: emit(0, 2); break;
                case 11: emit(1, 2); break;
                case 12: emit(1, 3); break;
                case 13: emit(0, 1); break;
                case 14: emit(0, 3); break;
                case 5: {
                    bool center_in = 0.25 * (v0 + v1 + v2 + v3) < r;
                    if (center_in) {
                        emit(0, 1);
                        emit(2, 3);
                    } else {
                        emit(0, 3);
                        emit(1, 2);
                    }
                    break;
                }
                case 10: {
                    bool center_in = 0.25 * (v0 + v1 + v2 + v3) < r;
                    if (center_in) {
                        emit(0, 3);
                        emit(1, 2);
                    } else {
                        emit(0, 1);
                        emit(2, 3);
                    }
                    break;
                }
                default: break;
            }
        }
    }
    require(!cloud.points.empty(), Errc::EmptyLevelSet, "no level-set crossings at this radius");
    return cloud;
}

// ---------------------------------------------------------------------------
// Projections and local measures
// ---------------------------------------------------------------------------

ProjectionRecord project_grid(const DistanceField& f, Vec2 x, double tol_multi) {
    const double h = f.grid.h;
    auto descend = [&](Vec2 p) {
        for (int it = 0; it < 4096; ++it) {
            double d = f.value_at(p);
            if (d < 0.75 * h) break;
            double gx = (f.value_at({p.x + h, p.y}) - f.value_at({p.x - h, p.y})) / (2.0 * h);
            double gy = (f.value_at({p.x, p.y + h}) - f.value_at({p.x, p.y - h})) / (2.0 * h);
            double gn = std::hypot(gx, gy);
            if (gn < 1e-9) break;
            double step = std::max(0.5 * h, 0.9 * d);
            p = {p.x - step * gx / gn, p.y - step * gy / gn};
        }
        return p;
    };
    ProjectionRecord rec;
    rec.x = x;
    rec.distance = f.value_at(x);
    std::vector<Vec2> ends;
    for (Vec2 seed : {x, Vec2{x.x + h, x.y}, Vec2{x.x - h, x.y}, Vec2{x.x, x.y + h},
                      Vec2{x.x, x.y - h}}) {
        Vec2 e = descend(seed);
        bool dup = false;
        for (const Vec2& q : ends)
            if (dist(q, e) <= tol_multi) { dup = true; break; }
        if (!dup) ends.push_back(e);
    }
    // Keep endpoints consistent with the measured distance.
    for (const Vec2& e : ends) {
        if (std::fabs(dist(x, e) - rec.distance) <= tol_multi + h) {
            rec.nearest.push_back(e);
            Vec2 v = x - e;
            double nn = v.norm();
            rec.directions.push_back(nn > 0 ? v * (1.0 / nn) : Vec2{0, 0});
        }
    }
    if (rec.nearest.empty()) {
        rec.nearest.push_back(ends.empty() ? x : ends[0]);
        rec.directions.push_back({0, 0});
    }
    rec.multiplicity = static_cast<int>(rec.nearest.size());
    return rec;
}

ProjectionRecord project_any(const Geometry2D& g, const DistanceField* f, Vec2 x, double tol_multi) {
    try {
        return g.project(x, tol_multi);
    } catch (const Error& e) {
        if (e.code() != Errc::UnsupportedShape || f == nullptr) throw;
        return project_grid(*f, x, std::max(tol_multi, 3.0 * f->grid.h));
    }
}

void attach_projections(SurfaceCloud& cloud, const Geometry2D& g, double tol_multi) {
    cloud.projections.resize(cloud.points.size());
    for (std::size_t k = 0; k < cloud.points.size(); ++k)
        cloud.projections[k] = g.project(cloud.points[k], tol_multi);
}

double local_volume(const DistanceField& f, const Geometry2D& g, double r, const PointPredicate& pred) {
    require(r >= f.trusted_min - 1e-12 && r <= f.trusted_max + 1e-12, Errc::RadiusOutOfBand,
            "radius outside the trusted band");
    const double cell = f.grid.h * f.grid.h;
    double total = 0.0;
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            if (f.values[f.grid.idx(i, j)] >= r) continue;
            ProjectionRecord rec = project_any(g, &f, f.grid.center(i, j), 1e-9);
            if (pred(rec)) total += cell;
        }
    return total;
}

SurfaceCloud local_surface(const DistanceField& f, const Geometry2D& g, double r,
                           const PointPredicate& pred) {
    SurfaceCloud cloud = extract_level_set(f, r);
    attach_projections(cloud, g, 1e-9);
    SurfaceCloud out;
    out.r = r;
    for (std::size_t k = 0; k < cloud.points.size(); ++k) {
        if (!pred(cloud.projections[k])) continue;
        out.points.push_back(cloud.points[k]);
        out.weights.push_back(cloud.weights[k]);
        out.projections.push_back(cloud.projections[k]);
    }
    return out;
}

}  // namespace paraset
