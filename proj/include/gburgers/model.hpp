#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gburgers/expr.hpp"
#include "gburgers/numerics.hpp"

namespace gburgers {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transport velocity a(u) and viscosity coefficients b(u), c(u).
struct FluxModel {
    Expression a, b, c;
};

/// Initial data F(x) together with the interval on which it is strictly
/// monotone and which contains the catastrophe foot.
struct InitialData {
    Expression F;
    double branch_lo = 0.0, branch_hi = 0.0;
};

/// Complete problem description: model functions, domain, discretization and
/// experiment parameters.
struct ProblemSpec {
    FluxModel flux;
    InitialData init;
    double x_min = -20.0, x_max = 20.0;
    int nx = 8000;
    double tau = 1e-4;
    std::vector<double> eps_list{0.01};
    double t_end = 1.8;
    std::string name = "model";
};

namespace detail {

inline double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ValidationError("key '" + key + "': cannot parse number from '" + text + "'");
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size())
        throw ValidationError("key '" + key + "': trailing characters in '" + text + "'");
    return v;
}

inline std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        // also tolerate space-separated entries within a comma chunk
        std::stringstream ws(item);
        std::string w;
        while (ws >> w) out.push_back(parse_number(key, w));
    }
    if (out.empty()) throw ValidationError("key '" + key + "': empty list");
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Validates the assembled spec: domain sanity, strict monotonicity of F on
/// the declared branch (dense sampling), a'(u) != 0 on the sampled solution
/// range.
inline void validate_problem(const ProblemSpec& spec) {
    if (!(spec.x_min < spec.x_max)) throw ValidationError("x_min must be less than x_max");
    if (spec.nx < 16) throw ValidationError("nx must be at least 16");
    if (!(spec.tau > 0.0)) throw ValidationError("tau must be positive");
    if (!(spec.t_end > 0.0)) throw ValidationError("t_end must be positive");
    for (double e : spec.eps_list)
        if (!(e > 0.0)) throw ValidationError("all eps values must be positive");
    if (!(spec.init.branch_lo < spec.init.branch_hi))
        throw ValidationError("branch_lo must be less than branch_hi");
    if (spec.init.branch_lo < spec.x_min || spec.init.branch_hi > spec.x_max)
        throw ValidationError("monotone branch must lie inside [x_min, x_max]");
    if (spec.flux.a.empty() || spec.flux.b.empty() || spec.flux.c.empty() || spec.init.F.empty())
        throw ValidationError("model functions a, b, c, F are required");

    // strict monotonicity of F on the branch, sampled on >= 1000 points
    const int n = 1200;
    const double lo = spec.init.branch_lo, hi = spec.init.branch_hi;
    double prev = spec.init.F.eval(lo);
    double vmin = prev, vmax = prev;
    int dir = 0;
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = spec.init.F.eval(x);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        const int d = v > prev ? 1 : (v < prev ? -1 : 0);
        if (d == 0 || (dir != 0 && d != dir))
            throw ValidationError("initial data not strictly monotone on branch near x = " +
                                  std::to_string(x));
        dir = d;
        prev = v;
    }

    // a'(u) != 0 on the sampled solution range
    for (int i = 0; i <= 256; ++i) {
        const double u = vmin + (vmax - vmin) * i / 256;
        const Jet aj = spec.flux.a.eval_jet(u, 1);
        if (std::fabs(aj.d[1]) < 1e-12)
            throw ValidationError("a'(u) vanishes at u = " + std::to_string(u));
    }
}

/// Parses the flat key-value model text (keys a, b, c, F, branch_lo,
/// branch_hi, x_min, x_max, nx, tau, eps, t_end) and validates the result.
inline ProblemSpec parse_problem_text(const std::string& text, const std::string& name = "model") {
    ProblemSpec spec;
    spec.name = name;
    std::map<std::string, bool> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_a = false, have_b = false, have_c = false, have_f = false;
    bool have_blo = false, have_bhi = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (seen[key]) throw ValidationError("duplicate key '" + key + "'");
        seen[key] = true;
        try {
            if (key == "a") { spec.flux.a = Expression::parse(value); have_a = true; }
            else if (key == "b") { spec.flux.b = Expression::parse(value); have_b = true; }
            else if (key == "c") { spec.flux.c = Expression::parse(value); have_c = true; }
            else if (key == "F") { spec.init.F = Expression::parse(value); have_f = true; }
            else if (key == "branch_lo") { spec.init.branch_lo = detail::parse_number(key, value); have_blo = true; }
            else if (key == "branch_hi") { spec.init.branch_hi = detail::parse_number(key, value); have_bhi = true; }
            else if (key == "x_min") spec.x_min = detail::parse_number(key, value);
            else if (key == "x_max") spec.x_max = detail::parse_number(key, value);
            else if (key == "nx") spec.nx = static_cast<int>(detail::parse_number(key, value));
            else if (key == "tau") spec.tau = detail::parse_number(key, value);
            else if (key == "eps") spec.eps_list = detail::parse_number_list(key, value);
            else if (key == "t_end") spec.t_end = detail::parse_number(key, value);
            else throw ValidationError("unknown key '" + key + "'");
        } catch (const ParseError& pe) {
            throw ValidationError("line " + std::to_string(lineno) + ", key '" + key +
                                  "': " + pe.what());
        }
    }
    if (!have_a || !have_b || !have_c || !have_f || !have_blo || !have_bhi)
        throw ValidationError("missing required key(s); need a, b, c, F, branch_lo, branch_hi");
    validate_problem(spec);
    return spec;
}

/// Loads and validates a model file.
inline ProblemSpec load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str(), path.stem().string());
}

/// Jet of the inverse f of the initial data at v, order 3: f(v) is the branch
/// point x with F(x) = v, and the derivatives follow from the inverse-function
/// identities f' = 1/F', f'' = -F''/F'^3, f''' = (3 F''^2 - F' F''')/F'^5.
inline Jet inverse_initial_jet(const InitialData& init, double v) {
    const double Flo = init.F.eval(init.branch_lo);
    const double Fhi = init.F.eval(init.branch_hi);
    const double lo = std::min(Flo, Fhi), hi = std::max(Flo, Fhi);
    const double pad = 1e-12 * (1.0 + std::fabs(lo) + std::fabs(hi));
    if (v < lo - pad || v > hi + pad)
        throw ValidationError("inverse_initial_jet: v = " + std::to_string(v) +
                              " outside the range of F on the branch");
    const Expression& F = init.F;
    const double x = find_root([&](double t) { return F.eval(t) - v; },
                               Bracket{init.branch_lo, init.branch_hi}, 1e-14);
    const Jet Fj = F.eval_jet(x, 3);
    const double F1 = Fj.d[1], F2 = Fj.d[2], F3 = Fj.d[3];
    if (F1 == 0.0)
        throw ValidationError("inverse_initial_jet: F'(x) vanishes at x = " + std::to_string(x));
    Jet f;
    f.order = 3;
    f.d[0] = x;
    f.d[1] = 1.0 / F1;
    f.d[2] = -F2 / (F1 * F1 * F1);
    f.d[3] = (3.0 * F2 * F2 - F1 * F3) / (F1 * F1 * F1 * F1 * F1);
    return f;
}

/// Antiderivative of the initial data, y -> int_0^y F(s) ds. Uses the atan
/// closed form when F matches the reference hump 1/(1+x^2) numerically,
/// adaptive quadrature otherwise.
inline std::function<double(double)> initial_antiderivative(const InitialData& init,
                                                            double tol = 1e-12) {
    bool is_hump = true;
    for (int i = 0; i <= 16 && is_hump; ++i) {
        const double x = -20.0 + 40.0 * i / 16.0;
        const double ref = 1.0 / (1.0 + x * x);
        if (std::fabs(init.F.eval(x) - ref) > 1e-12 * (1.0 + std::fabs(ref))) is_hump = false;
    }
    if (is_hump) return [](double y) { return std::atan(y); };
    const Expression F = init.F;
    return [F, tol](double y) {
        if (y == 0.0) return 0.0;
        return adaptive_quad([&](double s) { return F.eval(s); }, 0.0, y, tol);
    };
}

}  // namespace gburgers
