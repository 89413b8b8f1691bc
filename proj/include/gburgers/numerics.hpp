#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gburgers {

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Interval [lo, hi] with a sign change of the target function.
struct Bracket {
    double lo, hi;
};

/// Bisection-safeguarded inverse-quadratic/secant root finder (Brent).
/// Returns r inside the initial bracket with bracket width <= tol.
template <class F>
double find_root(F&& f, Bracket br, double tol = 1e-12, int max_iter = 200) {
    double a = br.lo, b = br.hi;
    if (!(a < b)) throw NumericsError("find_root: invalid bracket");
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw NumericsError("find_root: no sign change on bracket");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // inverse quadratic / secant step
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw NumericsError("find_root: max iterations exceeded");
}

/// All real roots of c3 z^3 + c2 z^2 + c1 z + c0, ascending, with multiplicity.
/// Trigonometric method in the three-real-root regime, one Newton polish per root.
inline std::vector<double> solve_cubic_real(double c3, double c2, double c1, double c0) {
    if (c3 == 0.0) throw NumericsError("solve_cubic_real: leading coefficient is zero");
    const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
    const double shift = b / 3.0;
    // depressed cubic y^3 + p y + q, z = y - shift
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    std::vector<double> roots;
    if (p == 0.0 && q == 0.0) {
        roots = {0.0, 0.0, 0.0};
    } else {
        const double disc = -4.0 * p * p * p - 27.0 * q * q;
        const double scale = 4.0 * std::fabs(p * p * p) + 27.0 * q * q;
        if (std::fabs(disc) <= 1e-14 * scale) {
            // double root regime (p != 0 here)
            const double y1 = 3.0 * q / p;
            const double y2 = -1.5 * q / p;
            roots = {y1, y2, y2};
        } else if (disc > 0.0) {
            const double m = 2.0 * std::sqrt(-p / 3.0);
            const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
            const double phi = std::acos(arg) / 3.0;
            constexpr double two_pi_3 = 2.0943951023931953;
            roots = {m * std::cos(phi), m * std::cos(phi - two_pi_3), m * std::cos(phi - 2.0 * two_pi_3)};
        } else {
            double y;
            if (q == 0.0) {
                y = 0.0;  // p > 0, single real root at 0
            } else {
                const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
                const double A = -std::copysign(std::cbrt(std::fabs(q) / 2.0 + s), q);
                y = A - p / (3.0 * A);
            }
            roots = {y};
        }
    }
    for (double& r : roots) {
        double z = r - shift;
        const double f = ((c3 * z + c2) * z + c1) * z + c0;
        const double fp = (3.0 * c3 * z + 2.0 * c2) * z + c1;
        if (fp != 0.0) z -= f / fp;
        r = z;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace detail {

template <class F>
double adapt_simpson(F& f, double a, double m, double b, double fa, double fm, double fb,
                     double whole, double budget, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * budget) return left + right + delta / 15.0;
    if (depth <= 0) throw NumericsError("adaptive_quad: subdivision limit reached");
    return adapt_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * budget, depth - 1) +
           adapt_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * budget, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with interval-halving error estimate.
/// Meets `tol` in the absolute-or-relative sense.
template <class F>
double adaptive_quad(F&& f, double a, double b, double tol = 1e-10) {
    if (!(tol > 0.0)) throw NumericsError("adaptive_quad: tol must be positive");
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    // coarse magnitude estimate for the relative branch of the tolerance
    double coarse = 0.0;
    {
        const int n = 8;
        const double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        coarse = s * h / 3.0;
    }
    const double budget = tol * std::max(1.0, std::fabs(coarse));
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * detail::adapt_simpson(f, a, m, b, fa, fm, fb, whole, budget, 48);
}

struct OdeSample {
    double t;
    std::vector<double> y;
};

/// Classical fixed-step RK4. The trajectory is sampled at every step and the
/// final step is shortened to land exactly on t1. Throws on non-finite state.
template <class RHS>
std::vector<OdeSample> ode_integrate(RHS&& rhs, std::vector<double> y0, double t0, double t1,
                                     double dt) {
    if (!(dt > 0.0)) throw NumericsError("ode_integrate: dt must be positive");
    if (!(t1 > t0)) throw NumericsError("ode_integrate: t1 must exceed t0");
    std::vector<OdeSample> out;
    out.push_back({t0, y0});
    double t = t0;
    std::vector<double> y = std::move(y0);
    const std::size_t n = y.size();
    std::vector<double> k1, k2, k3, k4, tmp(n);
    while (t < t1) {
        const double rem = t1 - t;
        const double h = std::min(dt, rem);
        k1 = rhs(t, y);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        k2 = rhs(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        k3 = rhs(t + 0.5 * h, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        k4 = rhs(t + h, tmp);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = (h == rem) ? t1 : t + h;
        for (double v : y)
            if (!std::isfinite(v))
                throw NumericsError("ode_integrate: non-finite state at t = " + std::to_string(t));
        out.push_back({t, y});
    }
    return out;
}

/// Tridiagonal linear system; sub/super have length n-1, diag and rhs length n.
struct TridiagonalSystem {
    std::vector<double> sub, diag, super, rhs;

    std::size_t size() const { return diag.size(); }
};

/// Thomas elimination. Throws on zero pivot.
inline std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    if (n == 0 || sys.sub.size() != n - 1 || sys.super.size() != n - 1 || sys.rhs.size() != n)
        throw NumericsError("thomas_solve: inconsistent system sizes");
    std::vector<double> cp(n - 1), dp(n);
    double piv = sys.diag[0];
    if (piv == 0.0) throw NumericsError("thomas_solve: zero pivot at row 0");
    if (n > 1) cp[0] = sys.super[0] / piv;
    dp[0] = sys.rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = sys.diag[i] - sys.sub[i - 1] * cp[i - 1];
        if (piv == 0.0) throw NumericsError("thomas_solve: zero pivot at row " + std::to_string(i));
        if (i < n - 1) cp[i] = sys.super[i] / piv;
        dp[i] = (sys.rhs[i] - sys.sub[i - 1] * dp[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) dp[i] -= cp[i] * dp[i + 1];
    return dp;
}

struct SlopeFit {
    double slope, intercept, residual;
};

/// Least-squares line through (log x, log y). residual is the RMS deviation
/// of log y about the fitted line.
inline SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw NumericsError("fit_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(points.size());
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw NumericsError("fit_slope: coordinates must be strictly positive");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw NumericsError("fit_slope: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    double ss = 0;
    for (const auto& [x, y] : points) {
        const double r = std::log(y) - (intercept + slope * std::log(x));
        ss += r * r;
    }
    return {slope, intercept, std::sqrt(ss / n)};
}

}  // namespace gburgers
