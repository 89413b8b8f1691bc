#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gburgers/model.hpp"
#include "gburgers/numerics.hpp"

namespace gburgers {

/// Uniform 1D node grid with nx cells (nx+1 nodes).
struct Grid1D {
    double x_min = 0, x_max = 0;
    int nx = 0;
    double h = 0;

    static Grid1D of(const ProblemSpec& spec) {
        Grid1D g{spec.x_min, spec.x_max, spec.nx, (spec.x_max - spec.x_min) / spec.nx};
        return g;
    }
    double node(int i) const { return x_min + h * i; }
    int nodes() const { return nx + 1; }
};

struct MassSample {
    double t, mass;
};

/// Nodal solution plus the running trapezoid-mass log.
struct SolverState {
    double t = 0;
    double eps = 0;
    std::vector<double> u;
    std::vector<MassSample> mass_history;
};

struct Snapshot {
    double t;
    std::vector<double> u;
};

inline double trapezoid_mass(const Grid1D& grid, const std::vector<double>& u) {
    double s = 0.5 * (u.front() + u.back());
    for (std::size_t i = 1; i + 1 < u.size(); ++i) s += u[i];
    return s * grid.h;
}

/// Linear interpolation of nodal values at x (clamped to the domain).
inline double sample_solution(const Grid1D& grid, const std::vector<double>& u, double x) {
    const double s = std::clamp((x - grid.x_min) / grid.h, 0.0, static_cast<double>(grid.nx));
    const int i = std::min(static_cast<int>(s), grid.nx - 1);
    const double w = s - i;
    return (1.0 - w) * u[i] + w * u[i + 1];
}

inline SolverState init_state(const ProblemSpec& spec, double eps) {
    if (!(eps > 0.0)) throw ValidationError("init_state: eps must be positive");
    const Grid1D grid = Grid1D::of(spec);
    SolverState st;
    st.eps = eps;
    st.u.resize(grid.nodes());
    for (int i = 0; i < grid.nodes(); ++i) st.u[i] = spec.init.F.eval(grid.node(i));
    st.mass_history.push_back({0.0, trapezoid_mass(grid, st.u)});
    return st;
}

namespace detail {

/// Fills out[i] = e(u[i]), taking the constant / identity shortcuts that the
/// reference models hit (a=u, b=1, c=0, b=u, c=1).
inline void eval_on_nodes(const Expression& e, const std::vector<double>& u,
                          std::vector<double>& out) {
    out.resize(u.size());
    if (e.is_identity()) {
        std::copy(u.begin(), u.end(), out.begin());
        return;
    }
    if (e.is_constant()) {
        std::fill(out.begin(), out.end(), e.eval(0.0));
        return;
    }
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = e.eval(u[i]);
}

struct StepWorkspace {
    std::vector<double> a, b, c;
    TridiagonalSystem sys;
};

}  // namespace detail

/// One semi-implicit step of u_t + a(u) u_x = eps [b(u) u_xx + c(u) u_x^2]:
/// coefficients frozen at u^m, transport and diffusion of u^{m+1} implicit,
/// the quadratic-gradient term linearized as c(u^m)(D u^m)(D u^{m+1}).
/// Boundary nodes are held at their current (initial) values.
inline void step(const ProblemSpec& spec, SolverState& state, double tau,
                 detail::StepWorkspace* ws = nullptr) {
    if (!(tau > 0.0)) throw ValidationError("step: tau must be positive");
    const Grid1D grid = Grid1D::of(spec);
    const int n = grid.nodes();
    const double h = grid.h, eps = state.eps;

    detail::StepWorkspace local;
    detail::StepWorkspace& w = ws ? *ws : local;
    detail::eval_on_nodes(spec.flux.a, state.u, w.a);
    detail::eval_on_nodes(spec.flux.b, state.u, w.b);
    detail::eval_on_nodes(spec.flux.c, state.u, w.c);

    auto& sys = w.sys;
    sys.sub.assign(n - 1, 0.0);
    sys.diag.assign(n, 0.0);
    sys.super.assign(n - 1, 0.0);
    sys.rhs.assign(n, 0.0);

    sys.diag[0] = 1.0;
    sys.rhs[0] = state.u[0];
    sys.diag[n - 1] = 1.0;
    sys.rhs[n - 1] = state.u[n - 1];

    const double inv_tau = 1.0 / tau;
    const double inv_2h = 0.5 / h;
    const double inv_h2 = 1.0 / (h * h);
    for (int i = 1; i + 1 < n; ++i) {
        const double bp = 0.5 * (w.b[i] + w.b[i + 1]);  // b at i+1/2
        const double bm = 0.5 * (w.b[i] + w.b[i - 1]);  // b at i-1/2
        const double grad = (state.u[i + 1] - state.u[i - 1]) * inv_2h;
        const double adv = w.a[i] * inv_2h;
        const double cg = eps * w.c[i] * grad * inv_2h;
        sys.sub[i - 1] = -adv - eps * bm * inv_h2 + cg;
        sys.diag[i] = inv_tau + eps * (bp + bm) * inv_h2;
        sys.super[i] = adv - eps * bp * inv_h2 - cg;
        sys.rhs[i] = state.u[i] * inv_tau;
    }

    std::vector<double> next;
    try {
        next = thomas_solve(sys);
    } catch (const NumericsError& e) {
        throw NumericsError(std::string(e.what()) + " (try a smaller tau)");
    }
    for (double v : next)
        if (!std::isfinite(v))
            throw NumericsError("step: non-finite solution values at t = " +
                                std::to_string(state.t + tau));
    state.u = std::move(next);
    state.t += tau;
}

/// Advances the state to t_target with the spec's tau (final step shortened),
/// recording mass every step and emitting snapshots linearly interpolated in
/// time at the requested instants.
inline std::vector<Snapshot> run_to(const ProblemSpec& spec, SolverState& state, double t_target,
                                    std::vector<double> snapshot_times = {}) {
    if (t_target < state.t) throw ValidationError("run_to: t_target must not precede state.t");
    const Grid1D grid = Grid1D::of(spec);
    std::sort(snapshot_times.begin(), snapshot_times.end());
    std::vector<Snapshot> snaps;
    std::size_t next_snap = 0;
    const double slack = 1e-12 * std::max(1.0, std::fabs(t_target));
    while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= state.t + slack) {
        snaps.push_back({snapshot_times[next_snap], state.u});
        ++next_snap;
    }

    detail::StepWorkspace ws;
    std::vector<double> u_prev;
    while (state.t < t_target - slack) {
        const double rem = t_target - state.t;
        const double tau = std::min(spec.tau, rem);
        const double t_prev = state.t;
        u_prev = state.u;
        step(spec, state, tau, &ws);
        if (tau == rem) state.t = t_target;
        state.mass_history.push_back({state.t, trapezoid_mass(grid, state.u)});
        while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= state.t + slack) {
            const double ts = snapshot_times[next_snap];
            const double theta = std::clamp((ts - t_prev) / (state.t - t_prev), 0.0, 1.0);
            Snapshot s{ts, std::vector<double>(state.u.size())};
            for (std::size_t i = 0; i < state.u.size(); ++i)
                s.u[i] = (1.0 - theta) * u_prev[i] + theta * state.u[i];
            snaps.push_back(std::move(s));
            ++next_snap;
        }
    }
    return snaps;
}

namespace detail {

inline bool is_standard_burgers(const ProblemSpec& spec) {
    for (int i = -2; i <= 2; ++i) {
        const double u = 0.37 * i + 0.11;
        if (std::fabs(spec.flux.a.eval(u) - u) > 1e-12) return false;
        if (std::fabs(spec.flux.b.eval(u) - 1.0) > 1e-12) return false;
        if (std::fabs(spec.flux.c.eval(u)) > 1e-12) return false;
    }
    return true;
}

}  // namespace detail

/// Quadrature reference for the standard Burgers model (a=u, b=1, c=0):
///   u(x,t) = int ((x-y)/t) e^{-G/(2 eps)} dy / int e^{-G/(2 eps)} dy,
///   G(y) = int_0^y F + (x-y)^2/(2t),
/// truncated and max-subtracted like the Pearcey evaluation.
inline double cole_hopf_reference(const ProblemSpec& spec, double x, double t, double eps,
                                  double tol = 1e-10) {
    if (!detail::is_standard_burgers(spec))
        throw ValidationError("cole_hopf_reference: requires the standard Burgers model (a=u, b=1, c=0)");
    if (!(t > 0.0)) throw ValidationError("cole_hopf_reference: requires t > 0");
    if (!(eps > 0.0)) throw ValidationError("cole_hopf_reference: requires eps > 0");

    const auto Phi = initial_antiderivative(spec.init, std::min(tol, 1e-12));
    const auto G = [&](double y) { return Phi(y) + (x - y) * (x - y) / (2.0 * t); };

    // global minimum of G: dense scan over a window wide enough that the
    // quadratic term dominates, then local refinement on G' = F(y) - (x-y)/t
    const double phi_bound =
        std::max(std::fabs(Phi(spec.x_min)), std::fabs(Phi(spec.x_max))) + 1.0;
    const double W = std::sqrt(2.0 * t * (2.0 * phi_bound + 80.0 * eps)) + 1e-3;
    const int n = 2000;
    int arg = 0;
    double gmin = G(x - W);
    std::vector<double> gs(n + 1);
    gs[0] = gmin;
    for (int i = 1; i <= n; ++i) {
        const double y = x - W + 2.0 * W * i / n;
        gs[i] = G(y);
        if (gs[i] < gmin) {
            gmin = gs[i];
            arg = i;
        }
    }
    double ystar = x - W + 2.0 * W * arg / n;
    if (arg > 0 && arg < n) {
        const auto dG = [&](double y) { return spec.init.F.eval(y) - (x - y) / t; };
        const double yl = ystar - 2.0 * W / n, yr = ystar + 2.0 * W / n;
        if (dG(yl) * dG(yr) < 0.0) ystar = find_root(dG, Bracket{yl, yr}, 1e-13);
    }
    const double gstar = std::min(gmin, G(ystar));

    // truncation: outermost scan points still within the e^{-40} weight band,
    // expanded outward to the exact threshold crossing
    const double target = gstar + 80.0 * eps;
    int il = arg, ir = arg;
    for (int i = 0; i <= n; ++i) {
        if (gs[i] <= target) {
            il = std::min(il, i);
            ir = std::max(ir, i);
        }
    }
    const auto expand = [&](double from, double dir) {
        if (G(from) >= target) return from;
        double stepw = 2.0 * W / n;
        while (G(from + dir * stepw) < target && stepw < 1e6) stepw *= 2.0;
        return find_root([&](double y) { return G(y) - target; },
                         dir < 0 ? Bracket{from - stepw, from} : Bracket{from, from + stepw}, 1e-6);
    };
    const double lo = expand(x - W + 2.0 * W * il / n, -1.0);
    const double hi = expand(x - W + 2.0 * W * ir / n, +1.0);

    const double inv2eps = 0.5 / eps;
    const auto weight = [&](double y) { return std::exp(-(G(y) - gstar) * inv2eps); };
    const double den = adaptive_quad(weight, lo, hi, tol);
    const double num =
        adaptive_quad([&](double y) { return (x - y) / t * weight(y); }, lo, hi, tol);
    return num / den;
}

}  // namespace gburgers
