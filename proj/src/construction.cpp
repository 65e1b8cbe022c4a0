#include "paraset/construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace paraset {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

struct GammaAssignment {
    std::vector<double> gamma;  // aligned to sbar (ascending)
    double gamma0 = 0.0;
};

// Canonical enumeration: realized radii in decreasing order get
// gamma0 * 2^{-k}, k = 1, 2, ...; closure-only points get zero.
GammaAssignment assign_gamma(const std::vector<double>& sbar, const std::vector<bool>& realized,
                             GammaPolicy pol, double gamma_budget) {
    GammaAssignment out;
    out.gamma.assign(sbar.size(), 0.0);
    double min_realized = 0.0;
    for (size_t i = 0; i < sbar.size(); ++i)
        if (realized[i]) min_realized = min_realized == 0.0 ? sbar[i] : std::min(min_realized, sbar[i]);
    double g0 = pol.gamma0 > 0.0 ? pol.gamma0 : 0.05 * min_realized;
    if (gamma_budget > 0.0) g0 = gamma_budget;
    out.gamma0 = g0;
    int k = 1;
    for (size_t i = sbar.size(); i-- > 0;) {  // descending
        if (!realized[i]) continue;
        out.gamma[i] = g0 * std::pow(pol.ratio, k);
        ++k;
    }
    return out;
}

Construction2D build_construction(std::vector<double> sbar_asc, const std::vector<bool>& realized,
                                  GammaPolicy pol, double eps, double b_override,
                                  double gamma_budget) {
    Construction2D c;
    require(!sbar_asc.empty(), Errc::EmptySet, "construction needs at least one radius");
    c.sbar = std::move(sbar_asc);
    c.eps = eps;
    c.b = b_override > 0.0 ? b_override : c.sbar.back();
    require(c.b >= c.sbar.back() - 1e-12, Errc::InvalidArgument, "b below max radius");

    const size_t m = c.sbar.size();
    c.g.assign(m, 0.0);
    double root2b = std::sqrt(2.0 * c.b);
    for (size_t i = 1; i < m; ++i)
        c.g[i] = c.g[i - 1] + root2b * std::sqrt(c.sbar[i] - c.sbar[i - 1]);

    GammaAssignment ga = assign_gamma(c.sbar, realized, pol, gamma_budget);
    c.gamma = ga.gamma;
    c.gamma0 = ga.gamma0;

    c.big_gamma.assign(m, 0.0);
    for (size_t i = 1; i < m; ++i) c.big_gamma[i] = c.big_gamma[i - 1] + c.gamma[i - 1];
    double gamma_total = c.big_gamma.back() + c.gamma.back();

    for (size_t i = 0; i < m; ++i) {
        double lo = c.g[i] + c.big_gamma[i];
        c.jay.push_back({lo, lo + c.gamma[i]});
    }

    double width = c.g.back() + gamma_total;  // sqrt(2b) G_{1/2}(cl N) + Gamma
    c.rect = Rect{-c.b, c.b + width, -c.b, c.b};

    // Pairwise separation audit: s'^2 - s^2 <= (g(s') - g(s))^2.
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            double lhs = c.sbar[j] * c.sbar[j] - c.sbar[i] * c.sbar[i];
            double rhs = (c.g[j] - c.g[i]) * (c.g[j] - c.g[i]);
            require(lhs <= rhs + 1e-9 * std::max(1.0, rhs), Errc::SeparationCheckFailed,
                    "separation inequality violated");
        }

    std::vector<Primitive2D> holes;
    for (size_t i = 0; i < m; ++i) {
        double s = c.sbar[i];
        if (c.gamma[i] > 0.0) {
            holes.push_back(StadiumPrim{{c.jay[i].lo, 0.0}, {c.jay[i].hi, 0.0}, s});
        } else {
            holes.push_back(DiskPrim{{c.jay[i].lo, 0.0}, s});
        }
        if (s >= c.b - 1e-15) c.tangent_to_boundary = true;
    }
    c.geometry = Geometry2D::difference(RectPrim{c.rect}, std::move(holes));

    for (size_t i = m; i-- > 0;) {
        if (c.gamma[i] > 0.0) {
            c.realized.push_back(c.sbar[i]);
            c.predicted_jumps.push_back(2.0 * c.gamma[i]);
        }
    }
    return c;
}

double gap_sum_of_points(const std::vector<double>& asc) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < asc.size(); ++i) s += std::sqrt(asc[i + 1] - asc[i]);
    return s;
}

}  // namespace

Primitive2D shift_prim(const Primitive2D& p, Vec2 by) {
    if (const auto* r = std::get_if<RectPrim>(&p))
        return RectPrim{{r->box.xmin + by.x, r->box.xmax + by.x, r->box.ymin + by.y,
                         r->box.ymax + by.y}};
    if (const auto* d = std::get_if<DiskPrim>(&p)) return DiskPrim{d->center + by, d->radius};
    if (const auto* s = std::get_if<StadiumPrim>(&p))
        return StadiumPrim{s->a + by, s->b + by, s->radius};
    PointSetPrim ps = std::get<PointSetPrim>(p);
    for (Vec2& q : ps.points) q = q + by;
    return ps;
}

Geometry2D shift_geometry(const Geometry2D& g, Vec2 by) {
    switch (g.kind()) {
        case Geometry2D::Kind::Leaf:
            return Geometry2D::leaf(shift_prim(g.leaf_prim(), by));
        case Geometry2D::Kind::Union: {
            std::vector<Geometry2D> kids;
            for (const Geometry2D& c : g.children()) kids.push_back(shift_geometry(c, by));
            return Geometry2D::unite(std::move(kids));
        }
        case Geometry2D::Kind::Difference: {
            std::vector<Primitive2D> rem;
            for (const Primitive2D& r : g.removed()) rem.push_back(shift_prim(r, by));
            return Geometry2D::difference(shift_prim(g.base(), by), std::move(rem));
        }
    }
    fail(Errc::UnsupportedShape, "unknown geometry kind");
}

Set1D construct_dim1(const TargetRadii& n, int depth) {
    n.validate();
    ExtReal total = radii_power_sum(n, 1.0, depth);
    require(total.finite, Errc::SummabilityViolated, "sum of radii diverges");
    std::vector<double> vals = n.materialize_values(depth);
    require(!vals.empty(), Errc::EmptySet, "no radii to realize");
    Set1D a;
    a.points.push_back(0.0);
    double acc = 0.0;
    for (double s : vals) {
        acc += 2.0 * s;
        a.points.push_back(acc);
    }
    a.validate();
    return a;
}

std::vector<double> predicted_nondiff_1d(const Set1D& a) {
    std::vector<double> gaps = a.gap_lengths();
    for (double& g : gaps) g /= 2.0;
    gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
    return gaps;  // descending, deduplicated
}

Construction2D construct_dim2_eps(const TargetRadii& n, GammaPolicy pol, double eps,
                                  double b_override, double gamma_budget) {
    n.validate();
    require(!n.generator_backed(), Errc::ConditionViolated,
            "eps-construction needs a set bounded away from 0; truncate generators first");
    double e = eps > 0.0 ? eps : n.inf_closure();
    ConditionReport rep = check_dim2_conditions(n, e);
    require(rep.verdict_i, Errc::ConditionViolated, "condition (i) fails for this N and eps");

    std::vector<double> sbar;
    std::vector<bool> realized;
    std::vector<double> vals = n.values;          // descending
    std::vector<double> extra = n.closure_extra;  // any order
    std::sort(extra.begin(), extra.end());
    std::sort(vals.begin(), vals.end());
    size_t a = 0, b = 0;
    while (a < vals.size() || b < extra.size()) {
        if (b == extra.size() || (a < vals.size() && vals[a] < extra[b])) {
            sbar.push_back(vals[a++]);
            realized.push_back(true);
        } else {
            sbar.push_back(extra[b++]);
            realized.push_back(false);
        }
    }
    return build_construction(std::move(sbar), realized, pol, e, b_override, gamma_budget);
}

TailDecomposition decompose_tail(const TargetRadii& n, int level, int depth) {
    n.validate();
    require(level >= 0, Errc::InvalidArgument, "level must be >= 0");
    TailDecomposition td;
    td.level = level;
    double b = n.sup_closure();
    td.delta = b * std::pow(2.0, -level);
    td.delta_next = 0.5 * td.delta;

    std::vector<double> pts = n.closure_points(depth);
    std::vector<double> band;
    for (double p : pts)
        if (p >= td.delta_next - 1e-15 && p <= td.delta + 1e-15) band.push_back(p);
    td.band_gap_sum = gap_sum_of_points(band);
    if (band.empty()) return td;

    double budget = 2.0 * std::sqrt(td.delta);
    std::vector<double> piece{band[0]};
    double g = 0.0;
    for (size_t i = 1; i < band.size(); ++i) {
        double step = std::sqrt(band[i] - band[i - 1]);
        if (g + step <= budget) {
            g += step;
            piece.push_back(band[i]);
        } else {
            td.pieces.push_back(std::move(piece));
            td.piece_gap_sums.push_back(g);
            piece = {band[i]};
            g = 0.0;
        }
    }
    td.pieces.push_back(std::move(piece));
    td.piece_gap_sums.push_back(g);
    td.piece_count = static_cast<int>(td.pieces.size());

    for (double pg : td.piece_gap_sums)
        require(pg <= budget + 1e-12, Errc::BoundViolated, "piece gap-sum budget violated");
    double p_bound = td.band_gap_sum / std::sqrt(td.delta) + 1.0;
    require(td.piece_count <= p_bound + 1e-9, Errc::BoundViolated, "piece count bound violated");
    return td;
}

FullConstruction2D construct_dim2_full(const TargetRadii& n, int max_level, GammaPolicy pol) {
    n.validate();
    require(max_level >= 0, Errc::InvalidArgument, "max_level must be >= 0");
    {
        IntegralReport ir = integral_condition(n, 0, false);
        require(ir.verdict != TailVerdict::Infinite, Errc::ConditionViolated,
                "condition (ii) fails: integral diverges");
    }

    FullConstruction2D fc;
    fc.b = n.sup_closure();
    std::vector<double> values = n.materialize_values();  // descending

    std::vector<Rect> rects;
    std::vector<double> claimed;  // radii already realized by an earlier band
    for (int band = 0; band <= max_level; ++band) {
        TailDecomposition td = decompose_tail(n, band);
        for (size_t i = 0; i < td.pieces.size(); ++i) {
            const std::vector<double>& piece = td.pieces[i];
            std::vector<bool> realized(piece.size(), false);
            for (size_t k = 0; k < piece.size(); ++k) {
                bool in_n = std::binary_search(values.rbegin(), values.rend(), piece[k]);
                bool seen = std::find(claimed.begin(), claimed.end(), piece[k]) != claimed.end();
                realized[k] = in_n && !seen;
                if (realized[k]) claimed.push_back(piece[k]);
            }
            double delta = td.delta;
            double g_piece = td.piece_gap_sums[i];
            // The gap-sum part matches the area bookkeeping; the second term
            // keeps gamma positive for single-point pieces and stays inside
            // the 4-vs-12 slack of the area bound.
            double budget = (2.0 - kSqrt2) * std::sqrt(delta) * g_piece +
                            0.1 * delta * std::pow(2.0, -static_cast<double>(i + 1));
            PackedPiece pp;
            pp.band = band;
            pp.index = static_cast<int>(i);
            pp.sub = build_construction(piece, realized, pol, td.delta_next, delta, budget);
            pp.rect = pp.sub.rect;
            fc.pieces.push_back(std::move(pp));
            rects.push_back(fc.pieces.back().rect);
        }
    }
    require(!fc.pieces.empty(), Errc::EmptySet, "no radii within the requested bands");

    PackResult pk = pack_rectangles(rects, 0.05);
    std::vector<Geometry2D> parts;
    std::vector<Primitive2D> hole_rects;
    for (size_t i = 0; i < fc.pieces.size(); ++i) {
        fc.pieces[i].shift = pk.shifts[i];
        Rect r = fc.pieces[i].rect;
        hole_rects.push_back(RectPrim{{r.xmin + pk.shifts[i].x, r.xmax + pk.shifts[i].x,
                                       r.ymin + pk.shifts[i].y, r.ymax + pk.shifts[i].y}});
        parts.push_back(shift_geometry(fc.pieces[i].sub.geometry, pk.shifts[i]));
    }
    fc.enclosing_radius = pk.enclosing_radius * 1.05;
    parts.insert(parts.begin(), Geometry2D::difference(DiskPrim{{0.0, 0.0}, fc.enclosing_radius},
                                                       std::move(hole_rects)));
    fc.geometry = Geometry2D::unite(std::move(parts));

    for (const PackedPiece& pp : fc.pieces) {
        fc.realized.insert(fc.realized.end(), pp.sub.realized.begin(), pp.sub.realized.end());
        fc.predicted_jumps.insert(fc.predicted_jumps.end(), pp.sub.predicted_jumps.begin(),
                                  pp.sub.predicted_jumps.end());
    }
    double floor_delta = fc.b * std::pow(2.0, -(max_level + 1));
    for (double v : values)
        if (v < floor_delta) fc.unrealized.push_back(v);
    return fc;
}

BoxConstruction construct_boxes_dimd(const TargetRadii& n, int dim, int depth) {
    n.validate();
    require(dim >= 1, Errc::InvalidArgument, "dimension must be >= 1");
    ExtReal sd = radii_power_sum(n, static_cast<double>(dim), depth);
    require(sd.finite, Errc::SummabilityViolated, "sum of s^d diverges");

    BoxConstruction bc;
    bc.dim = dim;
    std::vector<std::vector<double>> sizes;
    for (double s : n.materialize_values(depth)) {
        BoxD box;
        box.s = s;
        for (int k = 0; k + 1 < dim; ++k) box.size.push_back(3.0 * s);
        box.size.push_back(2.0 * s);
        for (int k = 0; k + 1 < dim; ++k) box.critical_cube.push_back({s, 2.0 * s});
        box.critical_cube.push_back({s, s});
        sizes.push_back(box.size);
        bc.boxes.push_back(std::move(box));
    }
    double radius = 0.0;
    std::vector<std::vector<double>> shifts = pack_boxes_nd(sizes, 0.05, &radius);
    bc.enclosing_radius = radius * 1.05;
    for (size_t i = 0; i < bc.boxes.size(); ++i) bc.boxes[i].shift = shifts[i];

    if (dim == 2) {
        std::vector<Primitive2D> holes;
        for (const BoxD& b : bc.boxes)
            holes.push_back(RectPrim{{b.shift[0], b.shift[0] + b.size[0], b.shift[1],
                                      b.shift[1] + b.size[1]}});
        bc.geometry2d =
            Geometry2D::difference(DiskPrim{{0.0, 0.0}, bc.enclosing_radius}, std::move(holes));
    }
    return bc;
}

PackResult pack_rectangles(const std::vector<Rect>& rects, double padding_frac) {
    PackResult out;
    require(!rects.empty(), Errc::EmptySet, "nothing to pack");
    double total_area = 0.0, max_w = 0.0, max_h = 0.0;
    for (const Rect& r : rects) {
        require(r.width() > 0.0 && r.height() > 0.0, Errc::InvalidArgument, "degenerate rectangle");
        total_area += r.area();
        max_w = std::max(max_w, r.width());
        max_h = std::max(max_h, r.height());
    }
    double W = std::max(max_w * (1.0 + padding_frac), std::sqrt(2.0 * total_area));

    std::vector<size_t> order(rects.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (rects[a].height() != rects[b].height()) return rects[a].height() > rects[b].height();
        return rects[a].width() > rects[b].width();
    });

    out.shifts.assign(rects.size(), Vec2{});
    double cx = 0.0, cy = 0.0, shelf_h = 0.0;
    double used_w = 0.0, used_h = 0.0;
    for (size_t id : order) {
        const Rect& r = rects[id];
        double w = r.width() * (1.0 + padding_frac);
        double h = r.height() * (1.0 + padding_frac);
        if (cx > 0.0 && cx + r.width() > W) {
            cy += shelf_h;
            cx = 0.0;
            shelf_h = 0.0;
        }
        out.shifts[id] = Vec2{cx - r.xmin, cy - r.ymin};
        used_w = std::max(used_w, cx + r.width());
        used_h = std::max(used_h, cy + r.height());
        cx += w;  // padding sits between rectangles, not after the last one
        shelf_h = std::max(shelf_h, h);
    }
    // Recenter so the enclosing disk sits at the origin.
    Vec2 center{0.5 * used_w, 0.5 * used_h};
    for (size_t i = 0; i < out.shifts.size(); ++i) out.shifts[i] = out.shifts[i] - center;
    out.used_box = Rect{-center.x, used_w - center.x, -center.y, used_h - center.y};
    out.enclosing_radius = 0.5 * std::hypot(used_w, used_h);
    require(std::isfinite(out.enclosing_radius), Errc::PackingOverflow, "packing radius overflow");
    return out;
}

std::vector<std::vector<double>> pack_boxes_nd(const std::vector<std::vector<double>>& sizes,
                                               double padding_frac, double* enclosing_radius) {
    require(!sizes.empty(), Errc::EmptySet, "nothing to pack");
    const size_t d = sizes[0].size();
    for (const auto& s : sizes)
        require(s.size() == d, Errc::InvalidArgument, "inconsistent box dimensions");

    double total_vol = 0.0, max_side = 0.0;
    for (const auto& s : sizes) {
        double v = 1.0;
        for (double x : s) {
            v *= x;
            max_side = std::max(max_side, x);
        }
        total_vol += v;
    }
    double W = std::max(max_side * (1.0 + padding_frac),
                        std::pow(2.0 * total_vol, 1.0 / static_cast<double>(d)));

    std::vector<size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return sizes[a].back() > sizes[b].back(); });

    // Nested next-fit shelves: axis 0 fills first; overflow carries into the
    // next axis by the running shelf extent. The last axis is unbounded.
    std::vector<std::vector<double>> shifts(sizes.size(), std::vector<double>(d, 0.0));
    std::vector<double> cursor(d, 0.0);
    std::vector<double> extent(d, 0.0);  // max padded size along axis k since its last carry
    std::vector<double> used(d, 0.0);
    for (size_t id : order) {
        std::vector<double> padded(d);
        for (size_t k = 0; k < d; ++k) padded[k] = sizes[id][k] * (1.0 + padding_frac);
        for (size_t axis = 0; axis + 1 < d; ++axis) {
            if (cursor[axis] > 0.0 && cursor[axis] + padded[axis] > W) {
                cursor[axis] = 0.0;
                cursor[axis + 1] += extent[axis + 1];
                extent[axis + 1] = 0.0;
            } else {
                break;
            }
        }
        for (size_t k = 0; k < d; ++k) {
            shifts[id][k] = cursor[k];
            used[k] = std::max(used[k], cursor[k] + padded[k]);
            if (k > 0) extent[k] = std::max(extent[k], padded[k]);
        }
        cursor[0] += padded[0];
    }
    double diag2 = 0.0;
    std::vector<double> center(d);
    for (size_t k = 0; k < d; ++k) {
        center[k] = 0.5 * used[k];
        diag2 += used[k] * used[k];
    }
    for (auto& s : shifts)
        for (size_t k = 0; k < d; ++k) s[k] -= center[k];
    if (enclosing_radius) *enclosing_radius = 0.5 * std::sqrt(diag2);
    return shifts;
}

}  // namespace paraset
