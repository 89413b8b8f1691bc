#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gburgers/driver.hpp"

namespace {

/// Model-file flags shared by every model-based subcommand; every model key
/// can be overridden on the command line.
struct ModelOptions {
    std::string model_path;
    std::optional<std::string> a, b, c, F;
    std::optional<double> branch_lo, branch_hi, x_min, x_max, tau, t_end;
    std::optional<int> nx;
    std::vector<double> eps;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model_path, "model file path")->required();
        cmd->add_option("--a", a, "override transport velocity a(u)");
        cmd->add_option("--b", b, "override viscosity coefficient b(u)");
        cmd->add_option("--c", c, "override quadratic-gradient coefficient c(u)");
        cmd->add_option("--F", F, "override initial data F(x)");
        cmd->add_option("--branch-lo,--branch_lo", branch_lo, "override branch_lo");
        cmd->add_option("--branch-hi,--branch_hi", branch_hi, "override branch_hi");
        cmd->add_option("--x-min,--x_min", x_min, "override x_min");
        cmd->add_option("--x-max,--x_max", x_max, "override x_max");
        cmd->add_option("--nx", nx, "override grid cell count");
        cmd->add_option("--tau", tau, "override time step");
        cmd->add_option("--eps", eps, "override eps list")->delimiter(',');
        cmd->add_option("--t-end,--t_end", t_end, "override t_end");
    }

    gburgers::ProblemSpec load() const {
        gburgers::ProblemSpec spec = gburgers::load_problem(model_path);
        if (a) spec.flux.a = gburgers::Expression::parse(*a);
        if (b) spec.flux.b = gburgers::Expression::parse(*b);
        if (c) spec.flux.c = gburgers::Expression::parse(*c);
        if (F) spec.init.F = gburgers::Expression::parse(*F);
        if (branch_lo) spec.init.branch_lo = *branch_lo;
        if (branch_hi) spec.init.branch_hi = *branch_hi;
        if (x_min) spec.x_min = *x_min;
        if (x_max) spec.x_max = *x_max;
        if (nx) spec.nx = *nx;
        if (tau) spec.tau = *tau;
        if (!eps.empty()) spec.eps_list = eps;
        if (t_end) spec.t_end = *t_end;
        gburgers::validate_problem(spec);
        return spec;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Burgers shock toolkit: characteristics, universal profile, "
                 "viscous solver and shock-front tracer"};
    app.require_subcommand(1);

    ModelOptions mo_cat, mo_cmp, mo_mass, mo_shock, mo_solve;
    std::string out_dir = "out";
    double tol = 1e-10;

    auto* cmd_cat = app.add_subcommand("catastrophe",
                                       "locate the gradient catastrophe and scaling constants");
    mo_cat.attach(cmd_cat);

    auto* cmd_cmp = app.add_subcommand("compare",
                                       "viscous solution vs asymptotic formula, slope over eps");
    mo_cmp.attach(cmd_cmp);
    double cmp_t = 1.54;
    std::vector<double> cmp_x;
    std::string fit_mode = "mean";
    cmd_cmp->add_option("--t", cmp_t, "comparison time t*");
    cmd_cmp->add_option("--x", cmp_x, "sample points x*")->delimiter(',')->required();
    cmd_cmp->add_option("--fit", fit_mode, "slope fit aggregation: mean | points")
        ->check(CLI::IsMember({"mean", "points"}));
    cmd_cmp->add_option("--out", out_dir, "output directory");

    auto* cmd_mass = app.add_subcommand("mass", "total-mass conservation log per eps");
    mo_mass.attach(cmd_mass);
    cmd_mass->add_option("--out", out_dir, "output directory");

    auto* cmd_prof = app.add_subcommand("profile", "tabulate the universal profile U(X,T)");
    double Xmin = -4, Xmax = 4, Tmin = -4, Tmax = 4;
    int Xn = 17, Tn = 5;
    cmd_prof->add_option("--X-min", Xmin, "grid X minimum");
    cmd_prof->add_option("--X-max", Xmax, "grid X maximum");
    cmd_prof->add_option("--X-n", Xn, "grid points in X");
    cmd_prof->add_option("--T-min", Tmin, "grid T minimum");
    cmd_prof->add_option("--T-max", Tmax, "grid T maximum");
    cmd_prof->add_option("--T-n", Tn, "grid points in T");
    cmd_prof->add_option("--tol", tol, "quadrature tolerance");
    cmd_prof->add_option("--out", out_dir, "output directory");

    auto* cmd_shock = app.add_subcommand("shockfront", "trace the shock front past t0");
    mo_shock.attach(cmd_shock);
    double shock_dt = 1e-3;
    cmd_shock->add_option("--dt", shock_dt, "output time resolution near t_end");
    cmd_shock->add_option("--out", out_dir, "output directory");

    auto* cmd_solve = app.add_subcommand("solve", "run one eps and write snapshot CSVs");
    mo_solve.attach(cmd_solve);
    std::vector<double> snap_times;
    cmd_solve->add_option("--snap", snap_times, "snapshot times")->delimiter(',')->required();
    cmd_solve->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_cat->parsed()) {
            const auto spec = mo_cat.load();
            gburgers::run_catastrophe(spec, std::cout);
        } else if (cmd_cmp->parsed()) {
            const auto spec = mo_cmp.load();
            const auto mode =
                fit_mode == "mean" ? gburgers::FitMode::mean : gburgers::FitMode::points;
            const auto rep =
                gburgers::run_compare(spec, cmp_t, cmp_x, spec.eps_list, mode, out_dir);
            for (const auto& [e, m] : rep.eps_mean)
                std::cout << "eps = " << e << "  mean |u_I - u_F| = " << m << "\n";
            if (rep.has_fit)
                std::cout << "slope = " << rep.fit.slope << "  intercept = " << rep.fit.intercept
                          << "  residual = " << rep.fit.residual << "\n";
            else
                std::cout << "slope fit skipped (need at least two eps values)\n";
        } else if (cmd_mass->parsed()) {
            const auto spec = mo_mass.load();
            const auto rep = gburgers::run_mass(spec, spec.eps_list, spec.t_end, out_dir);
            for (const auto& s : rep.series)
                std::cout << "eps = " << s.eps << "  max relative drift = " << s.max_relative_drift
                          << "\n";
        } else if (cmd_prof->parsed()) {
            gburgers::run_profile(Xmin, Xmax, Xn, Tmin, Tmax, Tn, tol, out_dir);
            std::cout << "profile grid written (" << Xn << " x " << Tn << ")\n";
        } else if (cmd_shock->parsed()) {
            const auto spec = mo_shock.load();
            const auto samples = gburgers::run_shockfront(spec, spec.t_end, shock_dt, out_dir);
            std::cout << "traced " << samples.size() << " steps; final x(" << samples.back().t
                      << ") = " << samples.back().x << "\n";
        } else if (cmd_solve->parsed()) {
            const auto spec = mo_solve.load();
            if (spec.eps_list.size() != 1)
                throw gburgers::ValidationError("solve: expected exactly one eps value");
            gburgers::run_solve(spec, spec.eps_list[0], snap_times, out_dir);
            std::cout << "wrote " << snap_times.size() << " snapshot(s)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
