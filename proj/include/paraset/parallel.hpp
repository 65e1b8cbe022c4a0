#ifndef PARASET_PARALLEL_HPP
#define PARASET_PARALLEL_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "paraset/geometry.hpp"

namespace paraset {

/// Cell centers sit on integer multiples of h: center(i,j) = ((ix0+i)h, (iy0+j)h).
struct GridSpec {
    double h = 0.0;
    long ix0 = 0, iy0 = 0;
    int nx = 0, ny = 0;

    Vec2 center(int i, int j) const { return {(ix0 + i) * h, (iy0 + j) * h}; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }

    static GridSpec covering(const Rect& box, double h);
};

struct Bitmap {
    GridSpec grid;
    std::vector<std::uint8_t> occupied;
    std::size_t count = 0;
};

enum class FieldSource { Exact, Grid };

struct DistanceField {
    GridSpec grid;
    std::vector<double> values;
    FieldSource source = FieldSource::Exact;
    double trusted_min = 0.0;
    double trusted_max = 0.0;

    double value_at(Vec2 p) const;  // bilinear interpolation
};

/// Bit per cell center via exact membership, plus sub-cell sampling of the
/// boundary curves so measure-zero pieces are represented.
Bitmap rasterize_membership(const Geometry2D& g, const Rect& box, double h);

/// Exact two-pass squared Euclidean distance transform (lower envelope of
/// parabolas per axis); distances from cell centers to the nearest occupied
/// cell center.
DistanceField distance_transform(const Bitmap& bm);

/// Distance field for a geometry: exact per-cell distances when the shape
/// family supports them, rasterization + EDT otherwise. The grid covers
/// bounding_box(g) inflated by r_max + 4h; the trusted band is [2h, r_max].
DistanceField make_distance_field(const Geometry2D& g, double h, double r_max);

std::vector<double> radii_grid(double lo, double hi, double step);

struct VolumeSamples {
    std::vector<double> radii;
    std::vector<double> v;
    std::vector<double> err;
    FieldSource source = FieldSource::Exact;
};

/// V(r) = h^2 #{cells with value < r} over a radii grid (one pass over the
/// sorted field). Radii must lie in the trusted band. By default the count is
/// averaged over one cell width in r, which cancels the row degeneracies of
/// axis-aligned boundaries; the raw and smoothed estimates differ by less
/// than the per-sample err bound.
VolumeSamples volume_function(const DistanceField& f, const std::vector<double>& radii,
                              bool smoothed = true);

// Exact 1D path: closed-form parallel volume of a compact subset of the line.
double volume_1d_exact(const Set1D& a, double r);
VolumeSamples volume_samples_1d(const Set1D& a, const std::vector<double>& radii);

struct Sided {
    double left = 0.0;
    double right = 0.0;
};
/// Exact one-sided derivatives of the 1D volume function.
Sided volume_1d_derivatives(const Set1D& a, double r);

enum class OracleKind { IntervalUnion1D, RectBoundary, TwoPoints, Disk };

/// Closed-form V(r) for the named families. Params: IntervalUnion1D: the
/// points; RectBoundary: {s}; TwoPoints: {distance}; Disk: {radius}.
double exact_volume_oracle(OracleKind kind, const std::vector<double>& params, double r);

struct SurfaceCloud {
    double r = 0.0;
    std::vector<Vec2> points;
    std::vector<double> weights;
    std::vector<ProjectionRecord> projections;  // parallel to points when attached

    double total_mass() const;
};

/// Marching-squares contour of the field at level r with linear interpolation;
/// weights are polyline segment lengths.
SurfaceCloud extract_level_set(const DistanceField& f, double r);

/// Steepest-descent projection on the field (fallback for shapes without
/// analytic projections).
ProjectionRecord project_grid(const DistanceField& f, Vec2 x, double tol_multi);

/// Analytic projection when supported, grid fallback otherwise.
ProjectionRecord project_any(const Geometry2D& g, const DistanceField* f, Vec2 x, double tol_multi);

void attach_projections(SurfaceCloud& cloud, const Geometry2D& g, double tol_multi = 1e-9);

using PointPredicate = std::function<bool(const ProjectionRecord&)>;

/// Volume of A_r restricted to cells whose metric projection satisfies the
/// predicate (exoskeleton cells are assigned by their first minimizer).
double local_volume(const DistanceField& f, const Geometry2D& g, double r, const PointPredicate& pred);

/// Surface cloud filtered by a predicate on the projection records.
SurfaceCloud local_surface(const DistanceField& f, const Geometry2D& g, double r,
                           const PointPredicate& pred);

}  // namespace paraset

#endif
