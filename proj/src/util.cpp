#include <cmath>

#include "paraset/core.hpp"

namespace paraset {

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    require(degree >= 0 && degree <= 2, Errc::InvalidArgument, "polyfit degree must be 0..2");
    require(x.size() == y.size() && x.size() > static_cast<size_t>(degree), Errc::InsufficientSamples,
            "polyfit needs more samples than the degree");
    const int m = degree + 1;
    // Normal equations on centered x for conditioning.
    double x0 = 0.0;
    for (double v : x) x0 += v;
    x0 /= static_cast<double>(x.size());

    double A[3][3] = {{0}};
    double b[3] = {0};
    for (size_t i = 0; i < x.size(); ++i) {
        double t = x[i] - x0;
        double pw[3] = {1.0, t, t * t};
        for (int r = 0; r < m; ++r) {
            b[r] += pw[r] * y[i];
            for (int c = 0; c < m; ++c) A[r][c] += pw[r] * pw[c];
        }
    }
    // Gaussian elimination with partial pivoting.
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::fabs(A[idx[r]][col]) > std::fabs(A[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        double d = A[idx[col]][col];
        require(std::fabs(d) > 1e-300, Errc::DegenerateFit, "singular polyfit system");
        for (int r = col + 1; r < m; ++r) {
            double f = A[idx[r]][col] / d;
            for (int c = col; c < m; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
            b[idx[r]] -= f * b[idx[col]];
        }
    }
    double c[3] = {0, 0, 0};
    for (int r = m - 1; r >= 0; --r) {
        double s = b[idx[r]];
        for (int k = r + 1; k < m; ++k) s -= A[idx[r]][k] * c[k];
        c[r] = s / A[idx[r]][r];
    }
    // Shift back to uncentered coordinates.
    std::vector<double> out(m, 0.0);
    if (m == 1) {
        out[0] = c[0];
    } else if (m == 2) {
        out[0] = c[0] - c[1] * x0;
        out[1] = c[1];
    } else {
        out[0] = c[0] - c[1] * x0 + c[2] * x0 * x0;
        out[1] = c[1] - 2.0 * c[2] * x0;
        out[2] = c[2];
    }
    return out;
}

LineFit linefit(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, Errc::InsufficientSamples, "linefit needs >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    require(std::fabs(den) > 1e-300, Errc::DegenerateFit, "degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    if (x.size() > 2) {
        double ss = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            double r = y[i] - (f.intercept + f.slope * x[i]);
            ss += r * r;
        }
        f.slope_stderr = std::sqrt(ss / (n - 2.0) * n / den);
    }
    return f;
}

}  // namespace paraset
