#ifndef PARASET_ANALYSIS_HPP
#define PARASET_ANALYSIS_HPP

#include <optional>
#include <vector>

#include "paraset/parallel.hpp"

namespace paraset {

struct DerivOptions {
    int window = 24;      // samples per one-sided window
    int gap = 2;          // samples excluded next to the query point
    int degree = 2;       // local polynomial degree
    int window_fine = 8;  // short window used to localize and classify jumps
};

struct DerivativeEstimate {
    double r = 0.0;
    double left = 0.0;
    double right = 0.0;
    int window = 0;
    double noise = 0.0;        // max fit residual, volume units
    double slope_se = 0.0;     // statistical standard error of left - right
    double slope_noise = 0.0;  // conservative slope-uncertainty bound

    double jump() const { return left - right; }
};

/// One-sided local-polynomial slopes at r, windows excluding the sample at r.
DerivativeEstimate one_sided_derivatives(const VolumeSamples& vs, double r, DerivOptions opt = {});

struct Detection {
    double r = 0.0;
    double jump = 0.0;
    double jump_sigma = 0.0;         // standard error of the kink-model fit
    double scale_consistency = 0.0;  // fine-window statistic over the worst coarse one
};

struct NondiffReport {
    std::vector<Detection> detected;
    std::vector<Detection> rejected_smooth;  // candidates failing the two-scale test
    std::vector<double> predicted;
    std::vector<double> matched;
    std::vector<double> missed;
    std::vector<double> spurious;
    double threshold = 0.0;
    double noise_floor = 0.0;
    double resolution = 0.0;  // radii grid step
};

/// Local maxima of the short-window jump statistic above the threshold,
/// positions refined by a parabolic fit. A genuine V' jump is invariant under
/// window widening, whereas smooth steep features (|V''| blow-ups at saddle
/// and tangency radii) grow with the window span; candidates failing that
/// scale-consistency test are reported separately. Jump values come from a
/// local piecewise (cubic + hinge) least-squares fit.
NondiffReport detect_nondiff(const VolumeSamples& vs, double threshold = 0.0,
                             const std::vector<double>& predicted = {}, double match_tol = 0.0,
                             DerivOptions opt = {});

struct KneserReport {
    double worst_violation = 0.0;
    double allowance = 0.0;
    std::size_t checked = 0;
    bool pass = false;
};

/// Verifies f(lambda b) - f(lambda a) <= lambda^d (f(b) - f(a)) over a
/// deterministic sweep of grid pairs and lambda in {1, 5/4, 3/2, 2}.
KneserReport kneser_check(const VolumeSamples& vs, int dim, double tol = 0.0);

struct ContinuityReport {
    bool applicable = true;
    bool converged = false;
    double central = 0.0;
    std::vector<double> deviations;  // max one-sided deviation per k
};

/// Checks that one-sided slopes at r0 +- 2^{-k} delta approach the slope at
/// r0. Not applicable when r0 sits within a window of a detected jump.
ContinuityReport derivative_continuity_check(const VolumeSamples& vs, double r0, double delta,
                                             int kmax, double tol,
                                             const std::vector<double>& known_jumps = {},
                                             DerivOptions opt = {});

/// x is critical for d(., A) iff x lies in the convex hull of its nearest
/// points (within tol_hull).
bool is_critical(const Geometry2D& g, Vec2 x, double tol_multi, double tol_hull);

struct CriticalValueScan {
    std::vector<double> values;      // cluster representatives
    std::size_t critical_samples = 0;
};

/// Distance values at grid points classified critical, clustered by tol.
/// axis_only restricts the sweep to the y = 0 row (plus a random audit) for
/// the axis-symmetric constructions.
CriticalValueScan scan_critical_values(const Geometry2D& g, const DistanceField& f,
                                       double cluster_tol, bool axis_only = false,
                                       int audit_samples = 256, std::uint64_t seed = 1);

struct CriticalityReport {
    double r = 0.0;
    std::size_t unique_nearest = 0;
    std::size_t multi = 0;
    std::size_t critical = 0;
    double total_mass = 0.0;
    double critical_mass = 0.0;   // estimate of H^1(bd A_r cap crit A)
    double non_unp_mass = 0.0;    // estimate of H^1(bd A_r \ Unp A)
    double critical_level = 0.0;  // median ray-death level of the critical samples
    double critical_threshold = 0.0;
    double non_unp_threshold = 0.0;
    bool differentiable = false;
};

/// Classifies the level set at r - offset_cells*h by continuing each sample
/// along its projection ray to the level-r sheet and testing
/// multiplicity/criticality there. The verdict is "differentiable" when the
/// critical mass stays below a few cells of contour weight and the non-Unp
/// mass below its sqrt(h) resolution limit.
CriticalityReport characterize_differentiability(const Geometry2D& g, const DistanceField& f,
                                                 double r, double c = 8.0,
                                                 int offset_cells = 2);

/// Jump of V' at a detected radius from the surface side: twice the critical
/// mass of the level sheet, cap effects removed by Richardson extrapolation
/// over the evaluation offset.
double surface_jump_estimate(const Geometry2D& g, const DistanceField& f, double r);

/// Full detection pipeline when the geometry is available: pools the sample
/// detector's candidates (accepted and rejected alike), keeps those the
/// criticality characterization confirms as non-differentiability radii, and
/// re-measures their jumps from the surface side. Smooth steep features at
/// isolated critical values are dropped here even when the windowed statistic
/// flags them.
NondiffReport detect_nondiff_verified(const Geometry2D& g, const DistanceField& f,
                                      const VolumeSamples& vs, double threshold = 0.0,
                                      const std::vector<double>& predicted = {},
                                      double match_tol = 0.0, DerivOptions opt = {});

struct TentDictionary {
    double rho = 0.0;      // tent radius
    double spacing = 0.0;  // lattice spacing of tent centers
};

/// Max over the dictionary (tents on a lattice plus the constant 1) of the
/// difference of integrals: a lower-bound proxy for the bounded-Lipschitz
/// distance of the two weighted clouds.
double flat_distance(const SurfaceCloud& mu, const SurfaceCloud& nu, TentDictionary dict);

struct ConvergenceRow {
    int k = 0;
    double r_below = 0.0, r_above = 0.0;
    double flat_below = 0.0, flat_above = 0.0;
    double mass_below = 0.0, mass_above = 0.0;
};

struct ConvergenceReport {
    double r0 = 0.0;
    double mass_r0 = 0.0;
    std::vector<ConvergenceRow> rows;
    bool eventually_decreasing_below = false;
    bool eventually_decreasing_above = false;
    double final_flat_below = 0.0, final_flat_above = 0.0;
    double final_mass_gap = 0.0;  // |mass_below - mass_above| at the last k
};

/// Flat distances and masses along the schedule r0 +- 2^{-k} delta, k=1..kmax.
ConvergenceReport weak_convergence_report(const Geometry2D& g, const DistanceField& f, double r0,
                                          double delta, int kmax);

}  // namespace paraset

#endif
