#ifndef PARASET_CONSTRUCTION_HPP
#define PARASET_CONSTRUCTION_HPP

#include <optional>
#include <vector>

#include "paraset/fractal.hpp"
#include "paraset/geometry.hpp"

namespace paraset {

Primitive2D shift_prim(const Primitive2D& p, Vec2 by);
Geometry2D shift_geometry(const Geometry2D& g, Vec2 by);

/// Gamma assignment over the canonical (decreasing) enumeration of N:
/// gamma_{s_k} = gamma0 * ratio^k, zero on closure points.
struct GammaPolicy {
    double gamma0 = -1.0;  // < 0: auto, 0.05 * min N
    double ratio = 0.5;
};

/// A = {a_0, a_1, ...} with a_k = 2(s_1 + ... + s_k), s_k descending.
Set1D construct_dim1(const TargetRadii& n, int depth = 0);

/// Half gap lengths of a compact 1D set, deduplicated, descending: the radii
/// where the parallel volume fails to be differentiable.
std::vector<double> predicted_nondiff_1d(const Set1D& a);

/// The planar construction for N bounded away from 0: a rectangle with a
/// union of stadium/disk holes centered on the x-axis.
struct Construction2D {
    double b = 0.0;
    double eps = 0.0;
    double gamma0 = 0.0;
    std::vector<double> sbar;       // cl(N) ascending
    std::vector<double> g;          // g(s) per sbar entry
    std::vector<double> gamma;      // gamma_s (0 on closure points)
    std::vector<double> big_gamma;  // Gamma_s = sum_{t<s} gamma_t
    std::vector<Interval> jay;      // J_s
    Rect rect;
    Geometry2D geometry;
    std::vector<double> realized;         // descending radii with gamma > 0
    std::vector<double> predicted_jumps;  // 2 gamma_s per realized radius
    bool tangent_to_boundary = false;     // some hole touches the rectangle edge
};

/// Requires verdict (i) of check_dim2_conditions at eps (default: min of N).
/// b_override >= max cl(N) replaces b; gamma_budget > 0 caps sum(gamma).
Construction2D construct_dim2_eps(const TargetRadii& n, GammaPolicy pol = {}, double eps = 0.0,
                                  double b_override = 0.0, double gamma_budget = 0.0);

/// Greedy split of the dyadic band K_n = cl(N) cap [delta_{n+1}, delta_n]
/// into pieces with certified degree-1/2 gap-sum bounds.
struct TailDecomposition {
    int level = 0;
    double delta = 0.0;       // delta_n = b 2^{-n}
    double delta_next = 0.0;  // delta_{n+1}
    double band_gap_sum = 0.0;
    std::vector<std::vector<double>> pieces;  // ascending point lists
    std::vector<double> piece_gap_sums;
    int piece_count = 0;
};
TailDecomposition decompose_tail(const TargetRadii& n, int level, int depth = 0);

struct PackedPiece {
    int band = 0;
    int index = 0;
    Construction2D sub;  // in local coordinates
    Rect rect;           // local R_{n,i}
    Vec2 shift;
};

struct FullConstruction2D {
    double b = 0.0;
    double enclosing_radius = 0.0;
    std::vector<PackedPiece> pieces;
    Geometry2D geometry;
    std::vector<double> realized;
    std::vector<double> predicted_jumps;
    std::vector<double> unrealized;  // radii below the truncation floor
};

/// Dyadic-band decomposition, per-piece sub-constructions, shelf packing into
/// an enclosing disk. Requires verdict (ii) on the truncation.
FullConstruction2D construct_dim2_full(const TargetRadii& n, int max_level, GammaPolicy pol = {});

/// Axis-aligned box construction valid in any dimension; numerics restricted
/// to d <= 2, higher d emits descriptors only.
struct BoxD {
    double s = 0.0;
    std::vector<double> size;   // (3s, ..., 3s, 2s)
    std::vector<double> shift;
    std::vector<Interval> critical_cube;  // [s,2s]^{d-1} x [s,s], local coords
};

struct BoxConstruction {
    int dim = 0;
    std::vector<BoxD> boxes;
    double enclosing_radius = 0.0;
    std::optional<Geometry2D> geometry2d;  // only for dim == 2
};

BoxConstruction construct_boxes_dimd(const TargetRadii& n, int dim, int depth = 0);

/// Deterministic shelf next-fit by decreasing height. Returned shifts place
/// the rectangles pairwise disjoint (strictly, when padding_frac > 0) inside
/// a disk of the reported radius centered at the origin.
struct PackResult {
    std::vector<Vec2> shifts;
    double enclosing_radius = 0.0;
    Rect used_box;
};
PackResult pack_rectangles(const std::vector<Rect>& rects, double padding_frac = 0.05);

/// d-dimensional variant used by the box construction (recursive shelves).
std::vector<std::vector<double>> pack_boxes_nd(const std::vector<std::vector<double>>& sizes,
                                               double padding_frac, double* enclosing_radius);

}  // namespace paraset

#endif
