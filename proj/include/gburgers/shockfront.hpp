#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gburgers/inviscid.hpp"
#include "gburgers/model.hpp"
#include "gburgers/numerics.hpp"
#include "gburgers/viscous.hpp"

namespace gburgers {

/// Shock position x = s(t) with the Lagrangian feet a1 < foot0 < a2 of the
/// two characteristics meeting at the shock.
struct ShockState {
    double t = 0, x = 0, a1 = 0, a2 = 0;
};

/// One recorded trace step: state, edge values and the equal-area control
/// residual |(F(a1)+F(a2))(a1-a2)/2 - int_{a2}^{a1} F|.
struct ShockSample {
    double t, x, a1, a2, u_left, u_right, residual;
};

namespace detail {

inline void require_transport_flux(const ProblemSpec& spec, const char* who) {
    for (int i = -2; i <= 2; ++i) {
        const double u = 0.31 * i + 0.07;
        if (std::fabs(spec.flux.a.eval(u) - u) > 1e-12)
            throw ValidationError(std::string(who) +
                                  ": the Rankine-Hugoniot system assumes a(u) = u");
    }
}

}  // namespace detail

/// Resolves the 0/0 start of the Rankine-Hugoniot system by the square-root
/// expansion of the feet about the catastrophe:
///   a_{1,2}(t0+dt) = a0 -+ (6 F'(a0)^2 / F'''(a0) dt)^{1/2},
///   x(t0+dt) = x0 + F(a0) dt.
/// The feet coefficient comes from matching the characteristic equations to
/// the centered shock; note it is 3x the caustic-edge coefficient, where the
/// system's denominators 1 + F'(a_i) t vanish.
inline ShockState seed(double cat_foot, const ProblemSpec& spec, double dt) {
    if (!(dt > 0.0)) throw ValidationError("seed: dt must be positive");
    detail::require_transport_flux(spec, "seed");
    const Jet Fj = spec.init.F.eval_jet(cat_foot, 3);
    const double F0 = Fj.d[0], F1 = Fj.d[1], F3 = Fj.d[3];
    if (!(F1 < 0.0)) throw ValidationError("seed: F'(a0) must be negative");
    if (!(F3 > 0.0))
        throw ValidationError("seed: F'''(a0) = " + std::to_string(F3) +
                              " must be positive for the square-root feet expansion");
    const double t0 = -1.0 / F1;
    const double x0 = cat_foot + F0 * t0;
    const double delta = std::sqrt(6.0 * F1 * F1 / F3 * dt);
    return {t0 + dt, x0 + F0 * dt, cat_foot - delta, cat_foot + delta};
}

namespace detail {

/// Right-hand side of the Rankine-Hugoniot characteristic system,
///   dx/dt  = (F(a1) + F(a2))/2,
///   da1/dt = (F(a2) - F(a1)) / (2 (1 + F'(a1) t)),
///   da2/dt = (F(a1) - F(a2)) / (2 (1 + F'(a2) t)).
/// Throws when a denominator reaches zero (characteristic refocusing).
inline std::vector<double> shock_rhs(const ProblemSpec& spec, double t,
                                     const std::vector<double>& y) {
    const double a1 = y[1], a2 = y[2];
    const Jet j1 = spec.init.F.eval_jet(a1, 1);
    const Jet j2 = spec.init.F.eval_jet(a2, 1);
    const double d1 = 1.0 + j1.d[1] * t;
    const double d2 = 1.0 + j2.d[1] * t;
    if (!(d1 > 1e-14) || !(d2 > 1e-14))
        throw NumericsError("shock trace: characteristic refocusing (1 + F'(a_i) t -> 0) at t = " +
                            std::to_string(t));
    const double f1 = j1.d[0], f2 = j2.d[0];
    return {0.5 * (f1 + f2), (f2 - f1) / (2.0 * d1), (f1 - f2) / (2.0 * d2)};
}

}  // namespace detail

inline constexpr double kShockSeedDt = 1e-6;

/// Traces the shock front from the catastrophe to t_end. The feet behave
/// like sqrt(t - t0), so the system is integrated in sigma = sqrt(t - t0)
/// with a fixed sigma step (the transformed system is smooth); dt sets the
/// time resolution reached at t_end. Every recorded step carries the
/// equal-area residual.
inline std::vector<ShockSample> trace(const ProblemSpec& spec, double t_end, double dt,
                                      double seed_dt = kShockSeedDt) {
    detail::require_transport_flux(spec, "trace");
    const CatastrophePoint cat = find_catastrophe(spec);
    if (!(t_end > cat.t0))
        throw ValidationError("trace: t_end = " + std::to_string(t_end) +
                              " must exceed the catastrophe time t0 = " + std::to_string(cat.t0));
    if (!(dt > 0.0)) throw ValidationError("trace: dt must be positive");
    if (!(t_end - cat.t0 > 4.0 * seed_dt))
        throw ValidationError("trace: t_end too close to t0 for the asymptotic seed");

    const ShockState s0 = seed(cat.foot, spec, seed_dt);
    const double sig0 = std::sqrt(seed_dt);
    const double sig1 = std::sqrt(t_end - cat.t0);
    double dsig = dt / (2.0 * sig1);
    dsig = std::min(dsig, (sig1 - sig0) / 64.0);

    const double t0 = s0.t - seed_dt;
    const auto rhs = [&](double sig, const std::vector<double>& y) {
        auto f = detail::shock_rhs(spec, t0 + sig * sig, y);
        for (double& v : f) v *= 2.0 * sig;
        return f;
    };
    const auto samples = ode_integrate(rhs, {s0.x, s0.a1, s0.a2}, sig0, sig1, dsig);

    const auto Phi = initial_antiderivative(spec.init, 1e-13);
    std::vector<ShockSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        const double t = t0 + s.t * s.t;
        const double x = s.y[0], a1 = s.y[1], a2 = s.y[2];
        const double u_l = spec.init.F.eval(a1);
        const double u_r = spec.init.F.eval(a2);
        const double residual =
            std::fabs(0.5 * (u_l + u_r) * (a1 - a2) - (Phi(a1) - Phi(a2)));
        out.push_back({t, x, a1, a2, u_l, u_r, residual});
    }
    return out;
}

}  // namespace gburgers
