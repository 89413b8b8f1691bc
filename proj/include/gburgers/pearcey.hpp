#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gburgers/numerics.hpp"

namespace gburgers {

/// Query point in the dimensionless rescaled coordinates of the universal
/// profile.
struct ProfileQuery {
    double X = 0, T = 0;
};

namespace detail {

/// Integrand phase S(z) = (z^4 - 2 z^2 T + 4 z X)/8.
inline double pearcey_phase(double z, double X, double T) {
    const double z2 = z * z;
    return (z2 * z2 - 2.0 * z2 * T + 4.0 * z * X) / 8.0;
}

struct PearceyWindow {
    double lo, hi;   // integration window
    double smin;     // global minimum of S, subtracted before exponentiation
    double zmin;     // its location
};

/// Critical points of S are the real roots of z^3 - T z + X = 0. The window
/// extends outward from the extreme critical points until S - S* >= 40, so
/// the discarded tail weight is below e^{-40}.
inline PearceyWindow pearcey_window(double X, double T) {
    const auto roots = solve_cubic_real(1.0, 0.0, -T, X);
    PearceyWindow w{};
    w.smin = pearcey_phase(roots[0], X, T);
    w.zmin = roots[0];
    for (double r : roots) {
        const double s = pearcey_phase(r, X, T);
        if (s < w.smin) {
            w.smin = s;
            w.zmin = r;
        }
    }
    const double target = w.smin + 40.0;
    const auto expand = [&](double from, double dir) {
        double step = 1.0;
        while (pearcey_phase(from + dir * step, X, T) < target && step < 1e8) step *= 2.0;
        return find_root(
            [&](double z) { return pearcey_phase(z, X, T) - target; },
            dir < 0 ? Bracket{from - step, from} : Bracket{from, from + step}, 1e-6);
    };
    w.lo = expand(roots.front(), -1.0);
    w.hi = expand(roots.back(), +1.0);
    return w;
}

}  // namespace detail

/// log of the Pearcey integral W(X,T) = int exp(-S(z)) dz, computed with the
/// global minimum of S factored out so that no intermediate value overflows.
inline double log_pearcey_W(const ProfileQuery& q, double tol = 1e-10) {
    const auto w = detail::pearcey_window(q.X, q.T);
    const double I = adaptive_quad(
        [&](double z) { return std::exp(-(detail::pearcey_phase(z, q.X, q.T) - w.smin)); }, w.lo,
        w.hi, tol);
    return std::log(I) - w.smin;
}

inline double log_pearcey_W(double X, double T, double tol = 1e-10) {
    return log_pearcey_W(ProfileQuery{X, T}, tol);
}

/// Universal profile U(X,T) = -2 d/dX log W. Since dS/dX = z/2 this equals
/// the mean of z under the weight exp(-S); both integrals share one window
/// and max-subtraction.
inline double profile_U(const ProfileQuery& q, double tol = 1e-10) {
    const auto w = detail::pearcey_window(q.X, q.T);
    const auto weight = [&](double z) {
        return std::exp(-(detail::pearcey_phase(z, q.X, q.T) - w.smin));
    };
    const double den = adaptive_quad(weight, w.lo, w.hi, tol);
    const double num = adaptive_quad([&](double z) { return z * weight(z); }, w.lo, w.hi, tol);
    return num / den;
}

inline double profile_U(double X, double T, double tol = 1e-10) {
    return profile_U(ProfileQuery{X, T}, tol);
}

/// Leading-order Laplace value of the profile: the global minimizer z* of S.
/// The exact double-well tie at X = 0 returns 0 by convention.
inline double saddle_U(const ProfileQuery& q) {
    if (q.X == 0.0) return 0.0;
    return detail::pearcey_window(q.X, q.T).zmin;
}

inline double saddle_U(double X, double T) { return saddle_U(ProfileQuery{X, T}); }

}  // namespace gburgers
