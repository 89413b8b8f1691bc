#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gburgers/numerics.hpp"

using namespace gburgers;

namespace {

// dense Gaussian elimination with partial pivoting; oracle for thomas_solve
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        REQUIRE(A[k][k] != 0.0);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) A[i][j] -= m * A[k][j];
            b[i] -= m * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

std::vector<std::vector<double>> dense_of(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        A[i][i] = sys.diag[i];
        if (i > 0) A[i][i - 1] = sys.sub[i - 1];
        if (i + 1 < n) A[i][i + 1] = sys.super[i];
    }
    return A;
}

}  // namespace

TEST_CASE("find_root solves bracketed problems") {
    CHECK(find_root([](double x) { return x * x - 2.0; }, {1.0, 2.0}, 1e-12) ==
          Catch::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(find_root([](double x) { return x; }, {-1.0, 1.0}, 1e-12) ==
          Catch::Approx(0.0).margin(1e-12));
    CHECK(find_root([](double x) { return std::cos(x); }, {1.0, 2.0}, 1e-12) ==
          Catch::Approx(1.5707963268).epsilon(1e-10));
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, {-1.0, 1.0}, 1e-12),
                    NumericsError);

    // result always lies inside the initial bracket
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int it = 0; it < 200; ++it) {
        const double c1 = coeff(rng), c0 = coeff(rng);
        const auto f = [&](double x) { return x * x * x + c1 * x + c0; };
        const double lo = -4.0, hi = 4.0;
        if (f(lo) * f(hi) > 0.0) continue;
        const double r = find_root(f, {lo, hi}, 1e-13);
        REQUIRE(r >= lo);
        REQUIRE(r <= hi);
        REQUIRE(std::fabs(f(r)) < 1e-9);
    }
}

TEST_CASE("solve_cubic_real returns every real root") {
    SECTION("single real root by substitution") {
        const auto r = solve_cubic_real(1, 0, 1, 2);
        REQUIRE(r.size() == 1);
        CHECK(r[0] == Catch::Approx(-1.0).epsilon(1e-12));
    }
    SECTION("three roots by factorization") {
        const auto r = solve_cubic_real(1, 0, -3, 0);
        REQUIRE(r.size() == 3);
        CHECK(r[0] == Catch::Approx(-std::sqrt(3.0)).epsilon(1e-12));
        CHECK(r[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(r[2] == Catch::Approx(std::sqrt(3.0)).epsilon(1e-12));
    }
    SECTION("single root against a bisection oracle") {
        // oracle: bisection on z^3 + 4z + 2 over [-1, 0] to 1e-10
        double lo = -1.0, hi = 0.0;
        const auto f = [](double z) { return z * z * z + 4.0 * z + 2.0; };
        for (int i = 0; i < 60; ++i) {
            const double m = 0.5 * (lo + hi);
            (f(lo) * f(m) <= 0.0 ? hi : lo) = m;
        }
        const double oracle = 0.5 * (lo + hi);
        const auto r = solve_cubic_real(1, 0, 4, 2);
        REQUIRE(r.size() == 1);
        CHECK(r[0] == Catch::Approx(oracle).margin(1e-10));
        CHECK(r[0] == Catch::Approx(-0.47347).margin(1e-5));
    }
    SECTION("multiplicity") {
        // (z-1)^2 (z+2) = z^3 - 3z + 2
        const auto r = solve_cubic_real(1, 0, -3, 2);
        REQUIRE(r.size() == 3);
        CHECK(r[0] == Catch::Approx(-2.0).margin(1e-7));
        CHECK(r[1] == Catch::Approx(1.0).margin(1e-6));
        CHECK(r[2] == Catch::Approx(1.0).margin(1e-6));

        const auto t = solve_cubic_real(2, 0, 0, 0);
        REQUIRE(t.size() == 3);
        for (double z : t) CHECK(z == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("leading zero rejected") {
        CHECK_THROWS_AS(solve_cubic_real(0, 1, 1, 1), NumericsError);
    }
    SECTION("residual property on random cubics") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int it = 0; it < 500; ++it) {
            double c3 = u(rng);
            if (std::fabs(c3) < 0.3) c3 = std::copysign(0.3, c3 == 0 ? 1.0 : c3);
            const double c2 = u(rng), c1 = u(rng), c0 = u(rng);
            const auto roots = solve_cubic_real(c3, c2, c1, c0);
            REQUIRE((roots.size() == 1 || roots.size() == 3));
            double prev = -1e300;
            for (double z : roots) {
                REQUIRE(z >= prev);
                prev = z;
                const double p = ((c3 * z + c2) * z + c1) * z + c0;
                REQUIRE(std::fabs(p) <= 1e-9 * std::max(1.0, std::fabs(c0)));
            }
        }
    }
    SECTION("roots recovered from constructed factorizations") {
        std::mt19937 rng(13);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int it = 0; it < 300; ++it) {
            double r1 = u(rng), r2 = u(rng), r3 = u(rng);
            std::vector<double> want{r1, r2, r3};
            std::sort(want.begin(), want.end());
            // well-separated roots only; the clustered regime is covered above
            if (want[1] - want[0] < 0.05 || want[2] - want[1] < 0.05) continue;
            const auto got = solve_cubic_real(1.0, -(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3,
                                              -r1 * r2 * r3);
            REQUIRE(got.size() == 3);
            for (int i = 0; i < 3; ++i) REQUIRE(got[i] == Catch::Approx(want[i]).margin(1e-7));
        }
    }
}

TEST_CASE("adaptive_quad meets its tolerance") {
    CHECK(adaptive_quad([](double x) { return x * x; }, 0.0, 1.0, 1e-10) ==
          Catch::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(adaptive_quad([](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-10) ==
          Catch::Approx(std::sqrt(4.0 * std::atan(1.0))).epsilon(1e-9));
    // Gamma closed form: int e^{-z^4/8} dz = 2^{3/4} Gamma(1/4) / 2
    CHECK(adaptive_quad([](double z) { return std::exp(-z * z * z * z / 8.0); }, -5.0, 5.0,
                        1e-11) == Catch::Approx(3.048762374932152).epsilon(1e-9));
    CHECK(adaptive_quad([](double x) { return std::sin(x); }, 1.0, 1.0, 1e-10) == 0.0);
    // orientation
    CHECK(adaptive_quad([](double x) { return x; }, 1.0, 0.0, 1e-10) == Catch::Approx(-0.5));
    // a genuinely discontinuous integrand exhausts the subdivision budget
    CHECK_THROWS_AS(
        adaptive_quad([](double x) { return x < 0.1234567 ? 0.0 : 1.0; }, 0.0, 1.0, 1e-15),
        NumericsError);
    CHECK_THROWS_AS(adaptive_quad([](double x) { return x; }, 0.0, 1.0, -1.0), NumericsError);
}

TEST_CASE("ode_integrate is classical fourth order") {
    SECTION("constant solution") {
        const auto traj = ode_integrate(
            [](double, const std::vector<double>& y) { return std::vector<double>{0.0 * y[0]}; },
            {3.5}, 0.0, 1.0, 0.1);
        for (const auto& s : traj) CHECK(s.y[0] == 3.5);
    }
    SECTION("exponential growth") {
        const auto traj = ode_integrate(
            [](double, const std::vector<double>& y) { return std::vector<double>{y[0]}; }, {1.0},
            0.0, 1.0, 1e-3);
        CHECK(traj.back().t == 1.0);
        CHECK(traj.back().y[0] == Catch::Approx(std::exp(1.0)).epsilon(1e-10));
    }
    SECTION("halving dt cuts the error about sixteenfold") {
        const auto run = [](double dt) {
            const auto traj = ode_integrate(
                [](double, const std::vector<double>& y) { return std::vector<double>{y[0]}; },
                {1.0}, 0.0, 1.0, dt);
            return std::fabs(traj.back().y[0] - std::exp(1.0));
        };
        const double ratio = run(0.02) / run(0.01);
        CHECK(ratio > 12.0);
        CHECK(ratio < 20.0);
    }
    SECTION("final step shortened to land on t1") {
        const auto traj = ode_integrate(
            [](double, const std::vector<double>& y) { return std::vector<double>{y[0]}; }, {1.0},
            0.0, 0.95, 0.1);
        REQUIRE(traj.size() == 11);
        CHECK(traj[1].t == Catch::Approx(0.1));
        CHECK(traj.back().t == 0.95);
    }
    SECTION("finite-time blowup is reported with its time") {
        try {
            ode_integrate(
                [](double, const std::vector<double>& y) {
                    return std::vector<double>{y[0] * y[0]};
                },
                {1.0}, 0.0, 2.0, 1e-3);
            FAIL("expected NumericsError");
        } catch (const NumericsError& e) {
            CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
        }
    }
    SECTION("precondition checks") {
        const auto rhs = [](double, const std::vector<double>& y) { return y; };
        CHECK_THROWS_AS(ode_integrate(rhs, {1.0}, 0.0, 1.0, 0.0), NumericsError);
        CHECK_THROWS_AS(ode_integrate(rhs, {1.0}, 1.0, 0.5, 0.1), NumericsError);
    }
}

TEST_CASE("thomas_solve matches dense elimination") {
    SECTION("identity") {
        TridiagonalSystem sys{{0, 0}, {1, 1, 1}, {0, 0}, {4, 5, 6}};
        const auto x = thomas_solve(sys);
        CHECK(x == std::vector<double>{4, 5, 6});
    }
    SECTION("three-by-three example") {
        TridiagonalSystem sys{{1, 1}, {2, 2, 2}, {1, 1}, {1, 2, 3}};
        const auto x = thomas_solve(sys);
        const auto want = dense_solve(dense_of(sys), sys.rhs);
        for (int i = 0; i < 3; ++i) CHECK(x[i] == Catch::Approx(want[i]).margin(1e-13));
    }
    SECTION("large diagonally dominant system has a tiny residual") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::size_t n = 1000;
        TridiagonalSystem sys;
        sys.sub.resize(n - 1);
        sys.super.resize(n - 1);
        sys.diag.resize(n);
        sys.rhs.resize(n);
        for (std::size_t i = 0; i < n - 1; ++i) {
            sys.sub[i] = u(rng);
            sys.super[i] = u(rng);
        }
        for (std::size_t i = 0; i < n; ++i) {
            sys.rhs[i] = u(rng);
            sys.diag[i] = 3.0 + u(rng);  // dominant
        }
        const auto x = thomas_solve(sys);
        double rmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ax = sys.diag[i] * x[i];
            if (i > 0) ax += sys.sub[i - 1] * x[i - 1];
            if (i + 1 < n) ax += sys.super[i] * x[i + 1];
            rmax = std::max(rmax, std::fabs(ax - sys.rhs[i]));
        }
        CHECK(rmax <= 1e-10);
    }
    SECTION("zero pivot reported") {
        TridiagonalSystem sys{{1}, {0, 1}, {1}, {1, 1}};
        CHECK_THROWS_AS(thomas_solve(sys), NumericsError);
    }
    SECTION("randomized agreement with the dense oracle for n <= 8") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        int done = 0;
        while (done < 200) {
            const std::size_t n = 1 + rng() % 8;
            TridiagonalSystem sys;
            sys.sub.resize(n - 1);
            sys.super.resize(n - 1);
            sys.diag.resize(n);
            sys.rhs.resize(n);
            for (auto& v : sys.sub) v = u(rng);
            for (auto& v : sys.super) v = u(rng);
            for (auto& v : sys.rhs) v = u(rng);
            for (auto& v : sys.diag) v = u(rng);
            // keep safely away from singular/zero-pivot cases for the comparison
            bool ok = true;
            for (auto& v : sys.diag)
                if (std::fabs(v) < 0.7) ok = false;
            if (!ok) continue;
            std::vector<double> got;
            try {
                got = thomas_solve(sys);
            } catch (const NumericsError&) {
                continue;
            }
            const auto want = dense_solve(dense_of(sys), sys.rhs);
            double scale = 1.0;
            for (double w : want) scale = std::max(scale, std::fabs(w));
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(got[i] == Catch::Approx(want[i]).margin(1e-9 * scale));
            ++done;
        }
    }
}

TEST_CASE("fit_slope fits log-log lines") {
    SECTION("exact square root law") {
        const auto fit = fit_slope({{1.0, 1.0}, {4.0, 2.0}, {9.0, 3.0}, {16.0, 4.0}});
        CHECK(fit.slope == Catch::Approx(0.5).margin(1e-12));
        CHECK(fit.residual <= 1e-12);
    }
    SECTION("linear law with prefactor") {
        const auto fit = fit_slope({{0.5, 1.5}, {1.0, 3.0}, {2.0, 6.0}});
        CHECK(fit.slope == Catch::Approx(1.0).margin(1e-12));
        CHECK(fit.intercept == Catch::Approx(std::log(3.0)).margin(1e-12));
    }
    SECTION("preconditions") {
        CHECK_THROWS_AS(fit_slope({{1.0, 1.0}}), NumericsError);
        CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {-2.0, 1.0}}), NumericsError);
        CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {2.0, 0.0}}), NumericsError);
        CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {1.0, 2.0}}), NumericsError);
    }
}
