#pragma once

#include <cmath>
#include <string>

#include "gburgers/inviscid.hpp"
#include "gburgers/model.hpp"
#include "gburgers/pearcey.hpp"

namespace gburgers {

/// Model-dependent factors mapping physical (x, t, u) near the catastrophe to
/// the universal coordinates (X, T, U):
///   alpha = (kappa b0^3 / a0'^3)^{1/4},
///   beta  = (kappa b0   / a0'^3)^{1/2},
///   gamma = (b0 / (kappa a0'))^{1/4}.
struct ScalingConstants {
    double alpha = 0, beta = 0, gamma = 0;
    double b0 = 0;
};

inline ScalingConstants scaling_constants(const CatastrophePoint& cat, const FluxModel& flux) {
    const double b0 = flux.b.eval(cat.v0);
    if (!(b0 > 0.0))
        throw ValidationError("scaling_constants: b(v0) = " + std::to_string(b0) +
                              " must be positive");
    if (!(cat.a0p * cat.kappa > 0.0))
        throw ValidationError("scaling_constants: a0' * kappa must be positive");
    const double ap3 = cat.a0p * cat.a0p * cat.a0p;
    ScalingConstants sc;
    sc.b0 = b0;
    sc.alpha = std::pow(cat.kappa * b0 * b0 * b0 / ap3, 0.25);
    sc.beta = std::sqrt(cat.kappa * b0 / ap3);
    sc.gamma = std::pow(b0 / (cat.kappa * cat.a0p), 0.25);

    const double r1 = cat.a0p * sc.beta * sc.gamma / sc.alpha - 1.0;
    const double r2 = b0 * sc.beta / (sc.alpha * sc.alpha) - 1.0;
    const double r3 = sc.alpha / (sc.gamma * sc.gamma * sc.gamma) - cat.kappa;
    if (std::fabs(r1) > 1e-12 || std::fabs(r2) > 1e-12 ||
        std::fabs(r3) > 1e-12 * std::max(1.0, std::fabs(cat.kappa)))
        throw NumericsError("scaling_constants: constraint identities violated");
    return sc;
}

/// Universal asymptotic formula near the catastrophe:
///   u = v0 + gamma eps^{1/4} U((x - x0 - a0 (t-t0)) / (alpha eps^{3/4}),
///                              (t - t0) / (beta eps^{1/2})).
inline double ilin_u(const CatastrophePoint& cat, const ScalingConstants& sc, double x, double t,
                     double eps, double tol = 1e-10) {
    if (!(eps > 0.0)) throw ValidationError("ilin_u: eps must be positive");
    const double X = (x - cat.x0 - cat.a0 * (t - cat.t0)) / (sc.alpha * std::pow(eps, 0.75));
    const double T = (t - cat.t0) / (sc.beta * std::sqrt(eps));
    return cat.v0 + sc.gamma * std::pow(eps, 0.25) * profile_U(X, T, tol);
}

/// First-order quasitriviality correction away from the shock:
///   u = v - eps [ (b/a') v_xx / v_x + ((c a' - b a'')/a'^2) v_x log|v_x| ],
/// with v_x, v_xx obtained by implicit differentiation of x = a(v) t + f(v).
inline double quasitriviality_correct(const ProblemSpec& spec, double x, double t, double eps) {
    const CharSolution sol = solve_characteristic_foot(spec, x, t);
    const double v = sol.v;

    const Jet Fj = spec.init.F.eval_jet(sol.foot, 2);
    const double F1 = Fj.d[1], F2 = Fj.d[2];
    if (std::fabs(F1) < 1e-12)
        throw ValidationError("quasitriviality_correct: v_x vanishes (foot at a critical point of F)");
    const Jet aj = spec.flux.a.eval_jet(v, 2);
    const double ap = aj.d[1], app = aj.d[2];
    if (std::fabs(ap) < 1e-12) throw ValidationError("quasitriviality_correct: a'(v) vanishes");

    const double fp = 1.0 / F1;
    const double fpp = -F2 / (F1 * F1 * F1);
    const double denom = ap * t + fp;
    if (std::fabs(denom) < 1e-8)
        throw ValidationError(
            "quasitriviality_correct: too close to the catastrophe (|a' t + f'| < 1e-8); use ilin_u");
    const double vx = 1.0 / denom;
    if (std::fabs(vx) < 1e-8)
        throw ValidationError("quasitriviality_correct: |v_x| below tolerance (correction singular)");
    const double vxx = -(app * t + fpp) * vx * vx * vx;

    const double b = spec.flux.b.eval(v);
    const double c = spec.flux.c.eval(v);
    const double correction =
        (b / ap) * (vxx / vx) + ((c * ap - b * app) / (ap * ap)) * vx * std::log(std::fabs(vx));
    return v - eps * correction;
}

}  // namespace gburgers
