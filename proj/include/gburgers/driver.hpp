#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include "gburgers/asymptotic.hpp"
#include "gburgers/inviscid.hpp"
#include "gburgers/model.hpp"
#include "gburgers/pearcey.hpp"
#include "gburgers/shockfront.hpp"
#include "gburgers/viscous.hpp"

namespace gburgers {

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << content;
}

}  // namespace detail

/// One comparison sample between the viscous solution and the asymptotic
/// formula at (x, t*) for a given eps.
struct CompareRow {
    double x, t, eps, u_numeric, u_asymptotic, abs_diff;
};

enum class FitMode { mean, points };

struct CompareReport {
    std::vector<CompareRow> rows;
    std::vector<std::pair<double, double>> eps_mean;  // (eps, mean |diff| over the x list)
    SlopeFit fit{};
    bool has_fit = false;
};

struct MassSeries {
    double eps;
    std::vector<MassSample> samples;
    double max_relative_drift = 0.0;
};

struct MassReport {
    std::vector<MassSeries> series;
};

/// catastrophe: locate the catastrophe, print the full record, the residuals
/// of the critical-point system and the scaling constants.
inline std::pair<CatastrophePoint, ScalingConstants> run_catastrophe(const ProblemSpec& spec,
                                                                     std::ostream& os) {
    const CatastrophePoint cat = find_catastrophe(spec);
    const ScalingConstants sc = scaling_constants(cat, spec.flux);
    const double f0 = cat.foot;
    const double r1 = cat.x0 - cat.a0 * cat.t0 - f0;
    const double r2 = cat.a0p * cat.t0 + cat.f0p;
    const double r3 = cat.a0pp * cat.t0 + cat.f0pp;
    using detail::fmt;
    os << "x0 = " << fmt(cat.x0) << "\n"
       << "t0 = " << fmt(cat.t0) << "\n"
       << "v0 = " << fmt(cat.v0) << "\n"
       << "foot = " << fmt(cat.foot) << "\n"
       << "a0 = " << fmt(cat.a0) << "\n"
       << "a0p = " << fmt(cat.a0p) << "\n"
       << "a0pp = " << fmt(cat.a0pp) << "\n"
       << "a0ppp = " << fmt(cat.a0ppp) << "\n"
       << "f0p = " << fmt(cat.f0p) << "\n"
       << "f0pp = " << fmt(cat.f0pp) << "\n"
       << "f0ppp = " << fmt(cat.f0ppp) << "\n"
       << "kappa = " << fmt(cat.kappa) << "\n"
       << "residual_x0 = " << fmt(r1) << "\n"
       << "residual_crit1 = " << fmt(r2) << "\n"
       << "residual_crit2 = " << fmt(r3) << "\n"
       << "alpha = " << fmt(sc.alpha) << "\n"
       << "beta = " << fmt(sc.beta) << "\n"
       << "gamma = " << fmt(sc.gamma) << "\n"
       << "b0 = " << fmt(sc.b0) << "\n";
    return {cat, sc};
}

/// compare: run the viscous solver to t* for each eps, sample at the x list,
/// evaluate the asymptotic formula, and fit log|u_I - u_F| against log eps.
inline CompareReport run_compare(const ProblemSpec& spec, double tstar,
                                 const std::vector<double>& xs, const std::vector<double>& eps_list,
                                 FitMode mode = FitMode::mean, const std::string& out_dir = "") {
    if (xs.empty()) throw ValidationError("compare: x list must not be empty");
    if (eps_list.empty()) throw ValidationError("compare: eps list must not be empty");
    const CatastrophePoint cat = find_catastrophe(spec);
    const ScalingConstants sc = scaling_constants(cat, spec.flux);
    const Grid1D grid = Grid1D::of(spec);

    std::vector<std::future<std::vector<double>>> jobs;
    for (double eps : eps_list) {
        jobs.push_back(std::async(std::launch::async, [&, eps] {
            SolverState st = init_state(spec, eps);
            run_to(spec, st, tstar);
            std::vector<double> uf(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i)
                uf[i] = sample_solution(grid, st.u, xs[i]);
            return uf;
        }));
    }

    CompareReport rep;
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        const double eps = eps_list[k];
        const std::vector<double> uf = jobs[k].get();
        double sum = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double ui = ilin_u(cat, sc, xs[i], tstar, eps);
            const double diff = std::fabs(ui - uf[i]);
            rep.rows.push_back({xs[i], tstar, eps, uf[i], ui, diff});
            sum += diff;
        }
        rep.eps_mean.push_back({eps, sum / static_cast<double>(xs.size())});
    }

    if (eps_list.size() >= 2) {
        std::vector<std::pair<double, double>> pts;
        if (mode == FitMode::mean) {
            pts = rep.eps_mean;
        } else {
            for (const auto& r : rep.rows) pts.push_back({r.eps, r.abs_diff});
        }
        rep.fit = fit_slope(pts);
        rep.has_fit = true;
    }

    if (!out_dir.empty()) {
        using detail::fmt;
        std::string csv = "x,t,eps,u_numeric,u_asymptotic,abs_diff\n";
        for (const auto& r : rep.rows)
            csv += fmt(r.x) + "," + fmt(r.t) + "," + fmt(r.eps) + "," + fmt(r.u_numeric) + "," +
                   fmt(r.u_asymptotic) + "," + fmt(r.abs_diff) + "\n";
        detail::write_file(std::filesystem::path(out_dir) / (spec.name + "_compare.csv"), csv);

        std::string agg = "eps,mean_abs_diff\n";
        for (const auto& [e, m] : rep.eps_mean) agg += fmt(e) + "," + fmt(m) + "\n";
        if (rep.has_fit)
            agg += "# slope = " + fmt(rep.fit.slope) + ", intercept = " + fmt(rep.fit.intercept) +
                   ", residual = " + fmt(rep.fit.residual) + "\n";
        detail::write_file(std::filesystem::path(out_dir) / (spec.name + "_compare_fit.csv"), agg);
    }
    return rep;
}

/// mass: run each eps to t_end and log the total mass per step.
inline MassReport run_mass(const ProblemSpec& spec, const std::vector<double>& eps_list,
                           double t_end, const std::string& out_dir = "") {
    if (eps_list.empty()) throw ValidationError("mass: eps list must not be empty");
    std::vector<std::future<SolverState>> jobs;
    for (double eps : eps_list) {
        jobs.push_back(std::async(std::launch::async, [&, eps] {
            SolverState st = init_state(spec, eps);
            run_to(spec, st, t_end);
            return st;
        }));
    }
    MassReport rep;
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        const SolverState st = jobs[k].get();
        MassSeries s;
        s.eps = eps_list[k];
        s.samples = st.mass_history;
        const double m0 = s.samples.front().mass;
        for (const auto& m : s.samples)
            s.max_relative_drift =
                std::max(s.max_relative_drift, std::fabs(m.mass - m0) / std::fabs(m0));
        rep.series.push_back(std::move(s));
    }
    if (!out_dir.empty()) {
        using detail::fmt;
        for (const auto& s : rep.series) {
            const double m0 = s.samples.front().mass;
            std::string csv = "t,mass,relative_drift\n";
            for (const auto& m : s.samples)
                csv += fmt(m.t) + "," + fmt(m.mass) + "," + fmt(std::fabs(m.mass - m0) / std::fabs(m0)) +
                       "\n";
            detail::write_file(
                std::filesystem::path(out_dir) / (spec.name + "_mass_eps" + fmt(s.eps) + ".csv"),
                csv);
        }
    }
    return rep;
}

struct ProfilePoint {
    double X, T, U;
};

/// profile: tabulate the universal profile U(X, T) on a rectangular grid.
inline std::vector<ProfilePoint> run_profile(double X_min, double X_max, int X_n, double T_min,
                                             double T_max, int T_n, double tol = 1e-10,
                                             const std::string& out_dir = "") {
    if (X_n < 1 || T_n < 1) throw ValidationError("profile: grid sizes must be positive");
    std::vector<ProfilePoint> pts;
    for (int j = 0; j < T_n; ++j) {
        const double T = T_n == 1 ? T_min : T_min + (T_max - T_min) * j / (T_n - 1);
        for (int i = 0; i < X_n; ++i) {
            const double X = X_n == 1 ? X_min : X_min + (X_max - X_min) * i / (X_n - 1);
            pts.push_back({X, T, profile_U(X, T, tol)});
        }
    }
    if (!out_dir.empty()) {
        using detail::fmt;
        std::string csv = "X,T,U\n";
        for (const auto& p : pts) csv += fmt(p.X) + "," + fmt(p.T) + "," + fmt(p.U) + "\n";
        detail::write_file(std::filesystem::path(out_dir) / "profile.csv", csv);
    }
    return pts;
}

/// shockfront: seed and trace the front, one CSV row per recorded step.
inline std::vector<ShockSample> run_shockfront(const ProblemSpec& spec, double t_end, double dt,
                                               const std::string& out_dir = "") {
    const auto samples = trace(spec, t_end, dt);
    if (!out_dir.empty()) {
        using detail::fmt;
        std::string csv = "t,x,a1,a2,u_left,u_right,equal_area_residual\n";
        for (const auto& s : samples)
            csv += fmt(s.t) + "," + fmt(s.x) + "," + fmt(s.a1) + "," + fmt(s.a2) + "," +
                   fmt(s.u_left) + "," + fmt(s.u_right) + "," + fmt(s.residual) + "\n";
        detail::write_file(std::filesystem::path(out_dir) / (spec.name + "_shockfront.csv"), csv);
    }
    return samples;
}

/// solve: run one eps and write a snapshot CSV per requested time.
inline std::vector<Snapshot> run_solve(const ProblemSpec& spec, double eps,
                                       std::vector<double> snapshot_times,
                                       const std::string& out_dir = "") {
    if (snapshot_times.empty()) throw ValidationError("solve: need at least one snapshot time");
    std::sort(snapshot_times.begin(), snapshot_times.end());
    SolverState st = init_state(spec, eps);
    const auto snaps = run_to(spec, st, snapshot_times.back(), snapshot_times);
    if (!out_dir.empty()) {
        using detail::fmt;
        const Grid1D grid = Grid1D::of(spec);
        for (const auto& s : snaps) {
            std::string csv = "# model=" + spec.name + " eps=" + fmt(eps) + " t=" + fmt(s.t) +
                              " nx=" + std::to_string(spec.nx) + " tau=" + fmt(spec.tau) + "\n";
            csv += "x,u\n";
            for (int i = 0; i < grid.nodes(); ++i)
                csv += fmt(grid.node(i)) + "," + fmt(s.u[i]) + "\n";
            detail::write_file(std::filesystem::path(out_dir) /
                                   (spec.name + "_solve_eps" + fmt(eps) + "_t" + fmt(s.t) + ".csv"),
                               csv);
        }
    }
    return snaps;
}

}  // namespace gburgers
