#ifndef PARASET_CORE_HPP
#define PARASET_CORE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace paraset {

// Error codes cover every failure mode a module contract names.
enum class Errc {
    InvalidArgument,
    UnsupportedShape,
    GridTooLarge,
    EmptySet,
    RadiusOutOfBand,
    EmptyLevelSet,
    UnknownKind,
    InsufficientSamples,
    DegenerateFit,
    InconclusiveTail,
    SummabilityViolated,
    ConditionViolated,
    SeparationCheckFailed,
    BoundViolated,
    PackingOverflow,
    EmptyCloud,
    IoError,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

// Extended real: finite value or +infinity (divergent sums, integrals).
struct ExtReal {
    double value = 0.0;
    bool finite = true;

    static ExtReal infinite() { return {std::numeric_limits<double>::infinity(), false}; }
    static ExtReal of(double v) { return {v, true}; }

    ExtReal& operator+=(const ExtReal& o) {
        finite = finite && o.finite;
        value = finite ? value + o.value : std::numeric_limits<double>::infinity();
        return *this;
    }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double t) const { return lo <= t && t <= hi; }
};

struct Rect {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
    bool contains(Vec2 p) const { return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax; }
    bool contains_interior(Vec2 p) const { return xmin < p.x && p.x < xmax && ymin < p.y && p.y < ymax; }
    double half_diagonal() const { return 0.5 * std::hypot(width(), height()); }

    Rect inflated(double m) const { return {xmin - m, xmax + m, ymin - m, ymax + m}; }

    static Rect hull(const Rect& a, const Rect& b) {
        return {std::min(a.xmin, b.xmin), std::max(a.xmax, b.xmax),
                std::min(a.ymin, b.ymin), std::max(a.ymax, b.ymax)};
    }
};

// Least-squares fit of y = sum_k c_k x^k, degree <= 2. Returns coefficients
// (size degree+1) or throws DegenerateFit when the normal system is singular.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

// Slope and intercept of the ordinary least-squares line, plus the standard
// error of the slope estimate.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
LineFit linefit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace paraset

#endif
