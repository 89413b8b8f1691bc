#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gburgers/model.hpp"
#include "gburgers/numerics.hpp"

namespace gburgers {

/// Full record of a generic gradient catastrophe: coordinates, derivatives of
/// the transport velocity a at v0 and of the inverse initial data f at v0,
/// and the genericity constant kappa = -(a0''' t0 + f0''')/6.
struct CatastrophePoint {
    double x0 = 0, t0 = 0, v0 = 0;
    double foot = 0;  // x-coordinate of the characteristic foot, f(v0)
    double a0 = 0, a0p = 0, a0pp = 0, a0ppp = 0;
    double f0p = 0, f0pp = 0, f0ppp = 0;
    double kappa = 0;
};

namespace detail {

/// Jet of g = a(F(x)) at x, to the requested order (<= 3).
inline Jet composite_velocity_jet(const ProblemSpec& spec, double x, int order) {
    const Jet Fj = spec.init.F.eval_jet(x, order);
    const Jet aj = spec.flux.a.eval_jet(Fj.d[0], order);
    std::array<double, Jet::max_order + 1> outer{};
    for (int k = 0; k <= order; ++k) outer[static_cast<std::size_t>(k)] = aj.d[k];
    return jet_compose(outer, Fj);
}

inline CatastrophePoint catastrophe_from_foot(const ProblemSpec& spec, double foot) {
    const Jet g = composite_velocity_jet(spec, foot, 2);
    if (!(g.d[1] < 0.0))
        throw ValidationError("find_catastrophe: composite velocity not decreasing at the foot");
    const double t0 = -1.0 / g.d[1];

    const Jet Fj = spec.init.F.eval_jet(foot, 3);
    const double v0 = Fj.d[0];
    const Jet aj = spec.flux.a.eval_jet(v0, 3);

    CatastrophePoint cat;
    cat.foot = foot;
    cat.v0 = v0;
    cat.t0 = t0;
    cat.a0 = aj.d[0];
    cat.a0p = aj.d[1];
    cat.a0pp = aj.d[2];
    cat.a0ppp = aj.d[3];
    cat.x0 = foot + cat.a0 * t0;

    const double F1 = Fj.d[1], F2 = Fj.d[2], F3 = Fj.d[3];
    if (F1 == 0.0) throw ValidationError("find_catastrophe: F' vanishes at the foot");
    cat.f0p = 1.0 / F1;
    cat.f0pp = -F2 / (F1 * F1 * F1);
    cat.f0ppp = (3.0 * F2 * F2 - F1 * F3) / (F1 * F1 * F1 * F1 * F1);
    cat.kappa = -(cat.a0ppp * t0 + cat.f0ppp) / 6.0;
    return cat;
}

}  // namespace detail

/// Locates the gradient catastrophe of the inviscid problem on the declared
/// monotone branch: the interior minimizer of -1/(a(F))' found by solving
/// (a(F))'' = 0, seeded by a dense grid scan.
inline CatastrophePoint find_catastrophe(const ProblemSpec& spec) {
    const int n = 2000;
    const double lo = spec.init.branch_lo, hi = spec.init.branch_hi;
    std::vector<double> xs(n + 1), gp(n + 1), gpp(n + 1);
    bool steepening = false;
    for (int i = 0; i <= n; ++i) {
        xs[i] = lo + (hi - lo) * i / n;
        const Jet g = detail::composite_velocity_jet(spec, xs[i], 2);
        gp[i] = g.d[1];
        gpp[i] = g.d[2];
        if (g.d[1] < 0.0) steepening = true;
    }
    if (!steepening)
        throw ValidationError("find_catastrophe: no steepening region ((a(F))' >= 0 on the branch)");

    // interior critical points of (a(F))' inside the steepening region
    std::vector<double> feet;
    for (int i = 0; i < n; ++i) {
        if (gpp[i] == 0.0 && i > 0) {
            feet.push_back(xs[i]);
        } else if (gpp[i] * gpp[i + 1] < 0.0) {
            const double xr = find_root(
                [&](double x) { return detail::composite_velocity_jet(spec, x, 2).d[2]; },
                Bracket{xs[i], xs[i + 1]}, 1e-14);
            feet.push_back(xr);
        }
    }

    double best_gp = 0.0;
    std::optional<double> best;
    for (double xr : feet) {
        const Jet g = detail::composite_velocity_jet(spec, xr, 2);
        if (g.d[1] < 0.0 && (!best || g.d[1] < best_gp)) {
            best = xr;
            best_gp = g.d[1];
        }
    }

    if (!best) {
        double mn = gp[0], mx = gp[0];
        int arg = 0;
        for (int i = 0; i <= n; ++i) {
            if (gp[i] < mn) { mn = gp[i]; arg = i; }
            mx = std::max(mx, gp[i]);
        }
        const double scale = std::max(std::fabs(mn), std::fabs(mx));
        if (mx - mn <= 1e-12 * std::max(1.0, scale)) {
            best = 0.5 * (lo + hi);  // flat steepening; degeneracy reported below via kappa
        } else if (arg == 0 || arg == n) {
            throw ValidationError(
                "find_catastrophe: steepening minimizer lies on the branch boundary (out of scope)");
        } else {
            best = xs[arg];
        }
    } else {
        // a boundary value beating every interior candidate means the true
        // minimizer is not interior
        const double bmin = std::min(gp[0], gp[n]);
        if (bmin < best_gp - 1e-10 * std::max(1.0, std::fabs(best_gp)))
            throw ValidationError(
                "find_catastrophe: steepening minimizer lies on the branch boundary (out of scope)");
    }

    CatastrophePoint cat = detail::catastrophe_from_foot(spec, *best);
    if (std::fabs(cat.a0p) < 1e-12)
        throw ValidationError("find_catastrophe: a'(v0) vanishes (condition a0' != 0 fails)");
    if (std::fabs(cat.kappa) <= 1e-10)
        throw ValidationError("find_catastrophe: non-generic catastrophe (kappa = 0 within tolerance)");
    if (cat.a0p * cat.kappa <= 0.0)
        throw ValidationError("find_catastrophe: uniqueness inequality a0' * kappa > 0 fails");
    return cat;
}

/// True iff (x, t) with t > t0 lies inside the cuspidal neighborhood
/// |x - x0 - a0 (t-t0)| / (t-t0)^{3/2} < safety * (2/(3 sqrt 3)) (a0'^3 / kappa)^{1/2}.
inline bool in_cusp(const CatastrophePoint& cat, double x, double t, double safety = 1.0) {
    if (!(t > cat.t0)) throw ValidationError("in_cusp: requires t > t0");
    const double dt = t - cat.t0;
    const double lhs = std::fabs(x - cat.x0 - cat.a0 * dt) / std::pow(dt, 1.5);
    const double rhs = safety * (2.0 / (3.0 * std::sqrt(3.0))) *
                       std::sqrt(cat.a0p * cat.a0p * cat.a0p / cat.kappa);
    return lhs < rhs;
}

/// Characteristic solution v together with the foot y of its characteristic
/// (x = y + a(F(y)) t, v = F(y)).
struct CharSolution {
    double v, foot;
};

/// Solves x = a(v) t + f(v) by bracketing the foot equation over the problem
/// domain. For t > t0 outside the cusp, the root continuous with the t < t0
/// branch is selected (by the sign of x - x0 - a0 (t-t0)) when the
/// catastrophe is supplied; otherwise multiple roots are an error.
inline CharSolution solve_characteristic_foot(const ProblemSpec& spec, double x, double t,
                                              const CatastrophePoint* cat = nullptr,
                                              double safety = 1.0) {
    if (!(t >= 0.0)) throw ValidationError("solve_characteristic: requires t >= 0");
    if (t == 0.0) return {spec.init.F.eval(x), x};

    const auto phi = [&](double y) { return y + spec.flux.a.eval(spec.init.F.eval(y)) * t - x; };
    const int n = 2000;
    const double lo = spec.x_min, hi = spec.x_max;
    std::vector<double> roots;
    double prev_y = lo, prev_f = phi(lo);
    if (prev_f == 0.0) roots.push_back(lo);
    for (int i = 1; i <= n; ++i) {
        const double y = lo + (hi - lo) * i / n;
        const double fy = phi(y);
        if (fy == 0.0) {
            roots.push_back(y);
        } else if (prev_f * fy < 0.0) {
            roots.push_back(find_root(phi, Bracket{prev_y, y}, 1e-14));
        }
        prev_y = y;
        prev_f = fy;
    }
    // dedupe near-coincident roots from adjacent brackets
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return std::fabs(a - b) < 1e-9 * (hi - lo); }),
                roots.end());

    if (roots.empty())
        throw ValidationError("solve_characteristic: no characteristic foot in the domain for (x=" +
                              std::to_string(x) + ", t=" + std::to_string(t) + ")");
    if (roots.size() == 1) return {spec.init.F.eval(roots[0]), roots[0]};

    if (!cat)
        throw ValidationError(
            "solve_characteristic: multiple characteristic roots (t past the catastrophe and no "
            "cusp guard supplied)");
    if (t <= cat->t0)
        throw ValidationError("solve_characteristic: unexpected multiple roots before t0");
    if (in_cusp(*cat, x, t, safety))
        throw ValidationError("solve_characteristic: (x, t) lies inside the cusp region");

    // continuous branch: on the right of the center line the solution comes
    // from the lowest v, on the left from the highest
    const double xbar = x - cat->x0 - cat->a0 * (t - cat->t0);
    double best_y = roots.front();
    double best_v = spec.init.F.eval(best_y);
    for (double y : roots) {
        const double v = spec.init.F.eval(y);
        if ((xbar > 0.0 && v < best_v) || (xbar <= 0.0 && v > best_v)) {
            best_v = v;
            best_y = y;
        }
    }
    return {best_v, best_y};
}

inline double solve_characteristic(const ProblemSpec& spec, double x, double t,
                                   const CatastrophePoint* cat = nullptr, double safety = 1.0) {
    return solve_characteristic_foot(spec, x, t, cat, safety).v;
}

/// Unique real root vbar of the local cubic xbar = a0' vbar tbar - kappa vbar^3.
/// Three real roots (inside the cusp) are rejected.
inline double local_cubic(const CatastrophePoint& cat, double xbar, double tbar) {
    const auto roots = solve_cubic_real(cat.kappa, 0.0, -cat.a0p * tbar, xbar);
    if (roots.size() != 1)
        throw ValidationError("local_cubic: three real roots (query lies inside the cusp)");
    return roots[0];
}

}  // namespace gburgers
