#include "paraset/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace paraset {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Absolute slack used only when filtering computed boundary-intersection
// candidates; set membership itself is tolerance-free.
constexpr double kCandidateTol = 1e-9;

double clamp01(double t) { return std::min(1.0, std::max(0.0, t)); }

Vec2 lerp(Vec2 a, Vec2 b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

double point_segment_distance(Vec2 x, Vec2 a, Vec2 b, Vec2* foot = nullptr) {
    Vec2 d = b - a;
    double L2 = d.norm2();
    double t = L2 > 0.0 ? clamp01((x - a).dot(d) / L2) : 0.0;
    Vec2 p = lerp(a, b, t);
    if (foot) *foot = p;
    return dist(x, p);
}

// Signed distance to the primitive's boundary: negative inside, 0 on the
// boundary, positive outside. Point sets are their own boundary.
double prim_signed(const Primitive2D& p, Vec2 x) {
    if (const auto* r = std::get_if<RectPrim>(&p)) {
        double qx = std::max(r->box.xmin - x.x, x.x - r->box.xmax);
        double qy = std::max(r->box.ymin - x.y, x.y - r->box.ymax);
        if (qx <= 0.0 && qy <= 0.0) return std::max(qx, qy);
        return std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
    }
    if (const auto* d = std::get_if<DiskPrim>(&p)) return dist(x, d->center) - d->radius;
    if (const auto* s = std::get_if<StadiumPrim>(&p))
        return point_segment_distance(x, s->a, s->b) - s->radius;
    const auto& ps = std::get<PointSetPrim>(p);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& q : ps.points) best = std::min(best, dist(x, q));
    return best;
}

bool angle_in_range(double theta, double theta0, double theta1) {
    double span = theta1 - theta0;
    double t = std::fmod(theta - theta0, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    return t <= span + 1e-12;
}

void push_arc_radial_candidate(const ArcCurve& arc, Vec2 x, std::vector<Vec2>& out) {
    Vec2 v = x - arc.center;
    double n = v.norm();
    if (n < 1e-15) {
        // Query at the center: every arc point is equidistant; emit a spread.
        for (double th : {arc.theta0, 0.5 * (arc.theta0 + arc.theta1), arc.theta1})
            out.push_back({arc.center.x + arc.radius * std::cos(th),
                           arc.center.y + arc.radius * std::sin(th)});
        return;
    }
    double theta = std::atan2(v.y, v.x);
    if (angle_in_range(theta, arc.theta0, arc.theta1))
        out.push_back({arc.center.x + arc.radius * v.x / n, arc.center.y + arc.radius * v.y / n});
}

void push_segment_foot_candidate(const SegmentCurve& seg, Vec2 x, std::vector<Vec2>& out) {
    Vec2 d = seg.b - seg.a;
    double L2 = d.norm2();
    if (L2 <= 0.0) {
        out.push_back(seg.a);
        return;
    }
    double t = (x - seg.a).dot(d) / L2;
    if (t > 0.0 && t < 1.0) out.push_back(lerp(seg.a, seg.b, t));
}

void circle_circle_points(Vec2 c0, double r0, Vec2 c1, double r1, std::vector<Vec2>& out) {
    Vec2 d = c1 - c0;
    double L = d.norm();
    if (L < 1e-15) return;  // concentric
    if (L > r0 + r1 + 1e-12 || L < std::fabs(r0 - r1) - 1e-12) return;
    double a = (L * L + r0 * r0 - r1 * r1) / (2.0 * L);
    double h2 = r0 * r0 - a * a;
    double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
    Vec2 u{d.x / L, d.y / L};
    Vec2 m{c0.x + a * u.x, c0.y + a * u.y};
    out.push_back({m.x + h * -u.y, m.y + h * u.x});
    if (h > 0.0) out.push_back({m.x - h * -u.y, m.y - h * u.x});
}

void segment_circle_points(Vec2 a, Vec2 b, Vec2 c, double r, std::vector<Vec2>& out) {
    Vec2 d = b - a;
    Vec2 f = a - c;
    double A = d.norm2();
    if (A <= 0.0) return;
    double B = 2.0 * f.dot(d);
    double C = f.norm2() - r * r;
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) {
        if (disc < -1e-12 * std::max(1.0, B * B)) return;
        disc = 0.0;
    }
    double sq = std::sqrt(disc);
    for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
        if (t >= -1e-12 && t <= 1.0 + 1e-12) out.push_back(lerp(a, b, clamp01(t)));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Set1D
// ---------------------------------------------------------------------------

void Set1D::validate() const {
    require(!points.empty() || !intervals.empty(), Errc::EmptySet, "Set1D is empty");
    for (size_t i = 0; i + 1 < points.size(); ++i)
        require(points[i] < points[i + 1], Errc::InvalidArgument, "Set1D points not strictly increasing");
    for (size_t i = 0; i < intervals.size(); ++i) {
        require(intervals[i].lo <= intervals[i].hi, Errc::InvalidArgument, "Set1D interval inverted");
        if (i + 1 < intervals.size())
            require(intervals[i].hi < intervals[i + 1].lo, Errc::InvalidArgument,
                    "Set1D intervals overlap");
    }
    for (double p : points)
        for (const Interval& iv : intervals)
            require(p < iv.lo || p > iv.hi, Errc::InvalidArgument, "Set1D point inside interval");
}

bool Set1D::contains(double x) const {
    if (std::binary_search(points.begin(), points.end(), x)) return true;
    auto it = std::upper_bound(intervals.begin(), intervals.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals.begin()) return false;
    --it;
    return it->contains(x);
}

double Set1D::distance(double x) const {
    double best = std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(points.begin(), points.end(), x);
    if (it != points.end()) best = std::min(best, *it - x);
    if (it != points.begin()) best = std::min(best, x - *std::prev(it));
    auto jt = std::upper_bound(intervals.begin(), intervals.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (jt != intervals.end()) best = std::min(best, jt->lo - x);
    if (jt != intervals.begin()) {
        const Interval& iv = *std::prev(jt);
        best = std::min(best, iv.contains(x) ? 0.0 : x - iv.hi);
    }
    return std::max(best, 0.0);
}

Interval Set1D::hull() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    if (!points.empty()) {
        lo = std::min(lo, points.front());
        hi = std::max(hi, points.back());
    }
    if (!intervals.empty()) {
        lo = std::min(lo, intervals.front().lo);
        hi = std::max(hi, intervals.back().hi);
    }
    return {lo, hi};
}

double Set1D::diameter() const {
    Interval h = hull();
    return h.hi - h.lo;
}

std::vector<double> Set1D::gap_lengths() const {
    validate();
    // Merge points and intervals into sorted occupied blocks.
    std::vector<Interval> blocks;
    blocks.reserve(points.size() + intervals.size());
    size_t pi = 0, ii = 0;
    while (pi < points.size() || ii < intervals.size()) {
        if (ii == intervals.size() || (pi < points.size() && points[pi] < intervals[ii].lo)) {
            blocks.push_back({points[pi], points[pi]});
            ++pi;
        } else {
            blocks.push_back(intervals[ii]);
            ++ii;
        }
    }
    std::vector<double> gaps;
    for (size_t i = 0; i + 1 < blocks.size(); ++i) {
        double g = blocks[i + 1].lo - blocks[i].hi;
        if (g > 0.0) gaps.push_back(g);
    }
    std::sort(gaps.begin(), gaps.end(), std::greater<double>());
    return gaps;
}

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

bool prim_contains(const Primitive2D& p, Vec2 x) { return prim_signed(p, x) <= 0.0; }
bool prim_contains_interior(const Primitive2D& p, Vec2 x) { return prim_signed(p, x) < 0.0; }
double prim_distance(const Primitive2D& p, Vec2 x) { return std::max(prim_signed(p, x), 0.0); }

Rect prim_bbox(const Primitive2D& p) {
    if (const auto* r = std::get_if<RectPrim>(&p)) return r->box;
    if (const auto* d = std::get_if<DiskPrim>(&p))
        return {d->center.x - d->radius, d->center.x + d->radius, d->center.y - d->radius,
                d->center.y + d->radius};
    if (const auto* s = std::get_if<StadiumPrim>(&p))
        return {std::min(s->a.x, s->b.x) - s->radius, std::max(s->a.x, s->b.x) + s->radius,
                std::min(s->a.y, s->b.y) - s->radius, std::max(s->a.y, s->b.y) + s->radius};
    const auto& ps = std::get<PointSetPrim>(p);
    require(!ps.points.empty(), Errc::EmptySet, "empty point set");
    Rect r{ps.points[0].x, ps.points[0].x, ps.points[0].y, ps.points[0].y};
    for (const Vec2& q : ps.points) {
        r.xmin = std::min(r.xmin, q.x);
        r.xmax = std::max(r.xmax, q.x);
        r.ymin = std::min(r.ymin, q.y);
        r.ymax = std::max(r.ymax, q.y);
    }
    return r;
}

std::vector<BoundaryCurve> prim_boundary_curves(const Primitive2D& p) {
    std::vector<BoundaryCurve> out;
    if (const auto* r = std::get_if<RectPrim>(&p)) {
        const Rect& b = r->box;
        out.push_back(SegmentCurve{{b.xmin, b.ymin}, {b.xmax, b.ymin}});
        out.push_back(SegmentCurve{{b.xmax, b.ymin}, {b.xmax, b.ymax}});
        out.push_back(SegmentCurve{{b.xmax, b.ymax}, {b.xmin, b.ymax}});
        out.push_back(SegmentCurve{{b.xmin, b.ymax}, {b.xmin, b.ymin}});
        return out;
    }
    if (const auto* d = std::get_if<DiskPrim>(&p)) {
        out.push_back(ArcCurve{d->center, d->radius, 0.0, 2.0 * kPi});
        return out;
    }
    if (const auto* s = std::get_if<StadiumPrim>(&p)) {
        Vec2 dvec = s->b - s->a;
        double L = dvec.norm();
        if (L < 1e-15) {
            out.push_back(ArcCurve{s->a, s->radius, 0.0, 2.0 * kPi});
            return out;
        }
        Vec2 u{dvec.x / L, dvec.y / L};
        Vec2 n{-u.y, u.x};
        Vec2 an = s->a + n * s->radius, bn = s->b + n * s->radius;
        Vec2 am = s->a - n * s->radius, bm = s->b - n * s->radius;
        double phi_n = std::atan2(n.y, n.x);
        out.push_back(SegmentCurve{an, bn});
        out.push_back(SegmentCurve{bm, am});
        out.push_back(ArcCurve{s->a, s->radius, phi_n, phi_n + kPi});
        out.push_back(ArcCurve{s->b, s->radius, phi_n + kPi, phi_n + 2.0 * kPi});
        return out;
    }
    const auto& ps = std::get<PointSetPrim>(p);
    for (const Vec2& q : ps.points) out.push_back(SegmentCurve{q, q});
    return out;
}

void prim_boundary_candidates(const Primitive2D& p, Vec2 x, std::vector<Vec2>& out) {
    if (const auto* ps = std::get_if<PointSetPrim>(&p)) {
        for (const Vec2& q : ps->points) out.push_back(q);
        return;
    }
    for (const BoundaryCurve& c : prim_boundary_curves(p)) {
        if (const auto* seg = std::get_if<SegmentCurve>(&c)) {
            push_segment_foot_candidate(*seg, x, out);
            out.push_back(seg->a);
            out.push_back(seg->b);
        } else {
            const auto& arc = std::get<ArcCurve>(c);
            push_arc_radial_candidate(arc, x, out);
            out.push_back({arc.center.x + arc.radius * std::cos(arc.theta0),
                           arc.center.y + arc.radius * std::sin(arc.theta0)});
            out.push_back({arc.center.x + arc.radius * std::cos(arc.theta1),
                           arc.center.y + arc.radius * std::sin(arc.theta1)});
        }
    }
}

void curve_intersections(const BoundaryCurve& a, const BoundaryCurve& b, std::vector<Vec2>& out) {
    std::vector<Vec2> raw;
    if (const auto* s0 = std::get_if<SegmentCurve>(&a)) {
        if (const auto* s1 = std::get_if<SegmentCurve>(&b)) {
            Vec2 d0 = s0->b - s0->a, d1 = s1->b - s1->a;
            double den = d0.x * d1.y - d0.y * d1.x;
            if (std::fabs(den) > 1e-15) {
                Vec2 w = s1->a - s0->a;
                double t = (w.x * d1.y - w.y * d1.x) / den;
                double s = (w.x * d0.y - w.y * d0.x) / den;
                if (t >= -1e-12 && t <= 1.0 + 1e-12 && s >= -1e-12 && s <= 1.0 + 1e-12)
                    raw.push_back(lerp(s0->a, s0->b, clamp01(t)));
            }
        } else {
            const auto& arc = std::get<ArcCurve>(b);
            std::vector<Vec2> pts;
            segment_circle_points(s0->a, s0->b, arc.center, arc.radius, pts);
            for (Vec2 q : pts) {
                double theta = std::atan2(q.y - arc.center.y, q.x - arc.center.x);
                if (angle_in_range(theta, arc.theta0, arc.theta1)) raw.push_back(q);
            }
        }
    } else {
        const auto& arc0 = std::get<ArcCurve>(a);
        if (std::holds_alternative<SegmentCurve>(b)) {
            curve_intersections(b, a, out);
            return;
        }
        const auto& arc1 = std::get<ArcCurve>(b);
        std::vector<Vec2> pts;
        circle_circle_points(arc0.center, arc0.radius, arc1.center, arc1.radius, pts);
        for (Vec2 q : pts) {
            double t0 = std::atan2(q.y - arc0.center.y, q.x - arc0.center.x);
            double t1 = std::atan2(q.y - arc1.center.y, q.x - arc1.center.x);
            if (angle_in_range(t0, arc0.theta0, arc0.theta1) &&
                angle_in_range(t1, arc1.theta0, arc1.theta1))
                raw.push_back(q);
        }
    }
    out.insert(out.end(), raw.begin(), raw.end());
}

// ---------------------------------------------------------------------------
// Geometry2D
// ---------------------------------------------------------------------------

struct Geometry2D::Node {
    Kind kind = Kind::Leaf;
    Primitive2D prim;
    Primitive2D base_prim;
    std::vector<Primitive2D> removed;
    std::vector<Geometry2D> children;
    std::vector<Vec2> corner_candidates;  // boundary-intersection points lying in the set
    Rect bbox;
};

namespace {

bool node_contains(const Geometry2D::Node& n, Vec2 x);

bool diff_contains(const Geometry2D::Node& n, Vec2 x) {
    if (!prim_contains(n.base_prim, x)) return false;
    for (const Primitive2D& r : n.removed)
        if (prim_contains_interior(r, x)) return false;
    return true;
}

// Tolerant membership used to filter computed candidate points: the base is
// grown and the removed interiors are shrunk by kCandidateTol.
bool diff_contains_tol(const Geometry2D::Node& n, Vec2 x) {
    if (prim_signed(n.base_prim, x) > kCandidateTol) return false;
    for (const Primitive2D& r : n.removed)
        if (prim_signed(r, x) < -kCandidateTol) return false;
    return true;
}

bool node_contains(const Geometry2D::Node& n, Vec2 x) {
    switch (n.kind) {
        case Geometry2D::Kind::Leaf:
            return prim_contains(n.prim, x);
        case Geometry2D::Kind::Union:
            for (const Geometry2D& c : n.children)
                if (c.contains(x)) return true;
            return false;
        case Geometry2D::Kind::Difference:
            return diff_contains(n, x);
    }
    return false;
}

// Nearest point of the closed base from an interior query, always on the
// base's boundary (which belongs to the set).
void base_inner_candidate(const Primitive2D& base, Vec2 x, std::vector<Vec2>& out) {
    if (const auto* r = std::get_if<RectPrim>(&base)) {
        const Rect& b = r->box;
        double m = x.x - b.xmin;
        Vec2 best{b.xmin, x.y};
        if (b.xmax - x.x < m) { m = b.xmax - x.x; best = {b.xmax, x.y}; }
        if (x.y - b.ymin < m) { m = x.y - b.ymin; best = {x.x, b.ymin}; }
        if (b.ymax - x.y < m) { best = {x.x, b.ymax}; }
        out.push_back(best);
        return;
    }
    if (const auto* d = std::get_if<DiskPrim>(&base)) {
        Vec2 v = x - d->center;
        double n = v.norm();
        if (n < 1e-15) {
            out.push_back({d->center.x + d->radius, d->center.y});
            return;
        }
        out.push_back({d->center.x + d->radius * v.x / n, d->center.y + d->radius * v.y / n});
        return;
    }
    // Stadium base: offset outward from the core-segment projection.
    if (const auto* s = std::get_if<StadiumPrim>(&base)) {
        Vec2 foot;
        point_segment_distance(x, s->a, s->b, &foot);
        Vec2 v = x - foot;
        double n = v.norm();
        if (n < 1e-15) {
            Vec2 dvec = s->b - s->a;
            double L = dvec.norm();
            Vec2 nn = L > 1e-15 ? Vec2{-dvec.y / L, dvec.x / L} : Vec2{0.0, 1.0};
            out.push_back(foot + nn * s->radius);
            out.push_back(foot - nn * s->radius);
            return;
        }
        out.push_back(foot + v * (s->radius / n));
        return;
    }
    fail(Errc::UnsupportedShape, "point-set base has no interior");
}

struct Best {
    double d = std::numeric_limits<double>::infinity();
    std::vector<Vec2> pts;
    Vec2 x{0.0, 0.0};
    double tol = 0.0;

    void consider(Vec2 y) {
        double dd = dist(x, y);
        if (dd > d + tol) return;
        if (dd < d) {
            d = dd;
            std::erase_if(pts, [&](const Vec2& q) { return dist(x, q) > d + tol; });
        }
        for (const Vec2& q : pts)
            if (dist(q, y) <= tol + 1e-12) return;
        pts.push_back(y);
    }
};

void node_candidates(const Geometry2D::Node& n, Vec2 x, Best& best) {
    switch (n.kind) {
        case Geometry2D::Kind::Leaf: {
            if (prim_contains(n.prim, x)) {
                best.consider(x);
                return;
            }
            std::vector<Vec2> cand;
            prim_boundary_candidates(n.prim, x, cand);
            for (Vec2 y : cand) best.consider(y);
            return;
        }
        case Geometry2D::Kind::Union: {
            for (const Geometry2D& c : n.children) node_candidates(c.node(), x, best);
            return;
        }
        case Geometry2D::Kind::Difference: {
            if (diff_contains(n, x)) {
                best.consider(x);
                return;
            }
            if (!prim_contains(n.base_prim, x)) {
                std::vector<Vec2> cand;
                prim_boundary_candidates(n.base_prim, x, cand);
                for (Vec2 y : cand)
                    if (diff_contains_tol(n, y)) best.consider(y);
                return;
            }
            // Inside a removed interior. Unconstrained nearest boundary points
            // of each removed primitive, corner points of the removed-union
            // boundary and the base boundary together contain every local
            // minimum of the distance to the set.
            std::vector<Vec2> cand;
            for (const Primitive2D& r : n.removed) prim_boundary_candidates(r, x, cand);
            for (Vec2 y : cand)
                if (diff_contains_tol(n, y)) best.consider(y);
            for (Vec2 y : n.corner_candidates) best.consider(y);
            std::vector<Vec2> bc;
            base_inner_candidate(n.base_prim, x, bc);
            for (Vec2 y : bc) best.consider(y);
            return;
        }
    }
}

}  // namespace

Geometry2D Geometry2D::leaf(Primitive2D prim) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Leaf;
    n->bbox = prim_bbox(prim);
    n->prim = std::move(prim);
    Geometry2D g;
    g.node_ = std::move(n);
    return g;
}

Geometry2D Geometry2D::unite(std::vector<Geometry2D> children) {
    require(!children.empty(), Errc::EmptySet, "union of nothing");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Union;
    n->bbox = children[0].bounding_box();
    for (const Geometry2D& c : children) n->bbox = Rect::hull(n->bbox, c.bounding_box());
    n->children = std::move(children);
    Geometry2D g;
    g.node_ = std::move(n);
    return g;
}

namespace {

// Closure containment with tangency allowed: removed primitive inside the
// closed base, up to 1e-9 slack.
bool base_covers(const Primitive2D& base, const Primitive2D& removed) {
    constexpr double tol = 1e-9;
    if (std::holds_alternative<PointSetPrim>(removed)) return false;
    if (const auto* rb = std::get_if<RectPrim>(&base)) {
        Rect r = prim_bbox(removed);
        return r.xmin >= rb->box.xmin - tol && r.xmax <= rb->box.xmax + tol &&
               r.ymin >= rb->box.ymin - tol && r.ymax <= rb->box.ymax + tol;
    }
    if (const auto* db = std::get_if<DiskPrim>(&base)) {
        if (const auto* rr = std::get_if<RectPrim>(&removed)) {
            const Rect& b = rr->box;
            for (Vec2 c : {Vec2{b.xmin, b.ymin}, Vec2{b.xmax, b.ymin}, Vec2{b.xmin, b.ymax},
                           Vec2{b.xmax, b.ymax}})
                if (dist(c, db->center) > db->radius + tol) return false;
            return true;
        }
        if (const auto* dr = std::get_if<DiskPrim>(&removed))
            return dist(dr->center, db->center) + dr->radius <= db->radius + tol;
        const auto& sr = std::get<StadiumPrim>(removed);
        return dist(sr.a, db->center) + sr.radius <= db->radius + tol &&
               dist(sr.b, db->center) + sr.radius <= db->radius + tol;
    }
    const auto& sb = std::get<StadiumPrim>(base);
    Rect r = prim_bbox(removed);
    for (Vec2 c : {Vec2{r.xmin, r.ymin}, Vec2{r.xmax, r.ymin}, Vec2{r.xmin, r.ymax},
                   Vec2{r.xmax, r.ymax}})
        if (point_segment_distance(c, sb.a, sb.b) > sb.radius + tol) return false;
    return true;
}

}  // namespace

Geometry2D Geometry2D::difference(Primitive2D base, std::vector<Primitive2D> removed) {
    require(!std::holds_alternative<PointSetPrim>(base), Errc::UnsupportedShape,
            "point set cannot be a difference base");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Difference;
    n->bbox = prim_bbox(base);
    for (const Primitive2D& r : removed)
        require(base_covers(base, r), Errc::InvalidArgument, "removed primitive escapes the base");
    n->base_prim = std::move(base);
    n->removed = std::move(removed);

    // Pairwise boundary intersections (removed x removed, removed x base):
    // corner points of the hole-union boundary, precomputed once.
    std::vector<std::vector<BoundaryCurve>> curves;
    curves.push_back(prim_boundary_curves(n->base_prim));
    for (const Primitive2D& r : n->removed) curves.push_back(prim_boundary_curves(r));
    std::vector<Vec2> pts;
    for (size_t i = 0; i < curves.size(); ++i)
        for (size_t j = i + 1; j < curves.size(); ++j)
            for (const BoundaryCurve& ca : curves[i])
                for (const BoundaryCurve& cb : curves[j]) curve_intersections(ca, cb, pts);
    for (Vec2 q : pts)
        if (diff_contains_tol(*n, q)) n->corner_candidates.push_back(q);

    Geometry2D g;
    g.node_ = std::move(n);
    return g;
}

bool Geometry2D::contains(Vec2 x) const { return node_contains(*node_, x); }

double Geometry2D::exact_distance(Vec2 x) const {
    if (contains(x)) return 0.0;
    Best best;
    best.x = x;
    node_candidates(*node_, x, best);
    require(best.d < std::numeric_limits<double>::infinity(), Errc::UnsupportedShape,
            "no distance candidates for this shape");
    return best.d;
}

ProjectionRecord Geometry2D::project(Vec2 x, double tol_multi) const {
    ProjectionRecord rec;
    rec.x = x;
    if (contains(x)) {
        rec.nearest = {x};
        rec.multiplicity = 1;
        rec.distance = 0.0;
        rec.directions = {Vec2{0.0, 0.0}};
        return rec;
    }
    Best best;
    best.x = x;
    best.tol = tol_multi;
    node_candidates(*node_, x, best);
    require(!best.pts.empty(), Errc::UnsupportedShape, "no projection candidates");
    rec.distance = best.d;
    rec.nearest = best.pts;
    rec.multiplicity = static_cast<int>(best.pts.size());
    for (const Vec2& a : rec.nearest) {
        Vec2 v = x - a;
        double nn = v.norm();
        rec.directions.push_back(nn > 0.0 ? v * (1.0 / nn) : Vec2{0.0, 0.0});
    }
    return rec;
}

Rect Geometry2D::bounding_box() const { return node_->bbox; }

double Geometry2D::diameter_bound() const {
    Rect b = bounding_box();
    return std::hypot(b.width(), b.height());
}

std::vector<BoundaryCurve> Geometry2D::boundary_curves() const {
    std::vector<BoundaryCurve> out;
    switch (node_->kind) {
        case Kind::Leaf:
            return prim_boundary_curves(node_->prim);
        case Kind::Union:
            for (const Geometry2D& c : node_->children) {
                auto cc = c.boundary_curves();
                out.insert(out.end(), cc.begin(), cc.end());
            }
            return out;
        case Kind::Difference: {
            out = prim_boundary_curves(node_->base_prim);
            for (const Primitive2D& r : node_->removed) {
                auto cc = prim_boundary_curves(r);
                out.insert(out.end(), cc.begin(), cc.end());
            }
            return out;
        }
    }
    return out;
}

Geometry2D::Kind Geometry2D::kind() const { return node_->kind; }
const Primitive2D& Geometry2D::leaf_prim() const { return node_->prim; }
const std::vector<Geometry2D>& Geometry2D::children() const { return node_->children; }
const Primitive2D& Geometry2D::base() const { return node_->base_prim; }
const std::vector<Primitive2D>& Geometry2D::removed() const { return node_->removed; }

double geom_distance(const Geometry2D& g, Vec2 x) { return g.exact_distance(x); }

}  // namespace paraset
