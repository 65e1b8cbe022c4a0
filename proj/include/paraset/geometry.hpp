#ifndef PARASET_GEOMETRY_HPP
#define PARASET_GEOMETRY_HPP

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "paraset/core.hpp"

namespace paraset {

/// Compact subset of the line: isolated points plus disjoint closed intervals.
struct Set1D {
    std::vector<double> points;       // strictly increasing
    std::vector<Interval> intervals;  // disjoint, disjoint from points, sorted

    void validate() const;
    bool contains(double x) const;
    double distance(double x) const;
    Interval hull() const;
    double diameter() const;

    // Lengths of the bounded complementary intervals inside the convex hull,
    // sorted non-increasing. Empty for an interval.
    std::vector<double> gap_lengths() const;
};

struct RectPrim {
    Rect box;
};

struct DiskPrim {
    Vec2 center;
    double radius = 0.0;
};

// Minkowski sum of the segment [a,b] with a closed disk of the given radius.
// a == b degenerates to a disk.
struct StadiumPrim {
    Vec2 a, b;
    double radius = 0.0;
};

struct PointSetPrim {
    std::vector<Vec2> points;
};

using Primitive2D = std::variant<RectPrim, DiskPrim, StadiumPrim, PointSetPrim>;

bool prim_contains(const Primitive2D& p, Vec2 x);
bool prim_contains_interior(const Primitive2D& p, Vec2 x);
double prim_distance(const Primitive2D& p, Vec2 x);  // 0 inside
Rect prim_bbox(const Primitive2D& p);

// Candidate nearest points on the primitive's boundary: every local minimum
// of y -> |x - y| over the boundary, plus the junctions of its smooth pieces.
void prim_boundary_candidates(const Primitive2D& p, Vec2 x, std::vector<Vec2>& out);

// Boundary decomposed into segments and circular arcs (used for pairwise
// corner computation and sub-cell rasterization of thin sets).
struct SegmentCurve {
    Vec2 a, b;
};
struct ArcCurve {
    Vec2 center;
    double radius = 0.0;
    double theta0 = 0.0;  // radians, CCW from +x
    double theta1 = 0.0;  // theta1 >= theta0
};
using BoundaryCurve = std::variant<SegmentCurve, ArcCurve>;
std::vector<BoundaryCurve> prim_boundary_curves(const Primitive2D& p);

// All intersection points of two boundary curves (up to 2).
void curve_intersections(const BoundaryCurve& a, const BoundaryCurve& b, std::vector<Vec2>& out);

/// Nearest-point data at a query point: all global minimizers within
/// `tol_multi` of the minimum distance, with unit directions from them to x.
struct ProjectionRecord {
    Vec2 x;
    std::vector<Vec2> nearest;
    int multiplicity = 0;
    std::vector<Vec2> directions;  // (x - a)/|x - a| per nearest point a
    double distance = 0.0;
};

/// CSG of exact primitives. Supported forms: a leaf, a union of geometries,
/// and closed-base-minus-open-removed-interiors. Membership is exact; the
/// distance and projection queries are exact on this family as well (the
/// removed primitives may overlap each other).
class Geometry2D {
  public:
    static Geometry2D leaf(Primitive2D prim);
    static Geometry2D unite(std::vector<Geometry2D> children);
    static Geometry2D difference(Primitive2D base, std::vector<Primitive2D> removed);

    bool contains(Vec2 x) const;
    double exact_distance(Vec2 x) const;
    ProjectionRecord project(Vec2 x, double tol_multi = 1e-9) const;
    Rect bounding_box() const;
    double diameter_bound() const;
    std::vector<BoundaryCurve> boundary_curves() const;

    enum class Kind { Leaf, Union, Difference };
    Kind kind() const;
    const Primitive2D& leaf_prim() const;
    const std::vector<Geometry2D>& children() const;
    const Primitive2D& base() const;
    const std::vector<Primitive2D>& removed() const;

    struct Node;
    const Node& node() const { return *node_; }

  private:
    std::shared_ptr<const Node> node_;
};

double geom_distance(const Geometry2D& g, Vec2 x);  // alias of exact_distance

}  // namespace paraset

#endif
