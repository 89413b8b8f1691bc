#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "gburgers/model.hpp"

using namespace gburgers;

namespace {

const char* kStandardModel = R"(
# standard Burgers
a = u
b = 1
c = 0
F = 1/(1+x^2)
branch_lo = 0
branch_hi = 20
x_min = -20
x_max = 20
nx = 8000
tau = 1e-4
eps = 0.1, 0.01
t_end = 1.8
)";

const char* kGeneralizedModel = R"(
a = u
b = u
c = 1
F = 1/(1+x^2)
branch_lo = 0
branch_hi = 20
)";

// test-side composition of jets (Faa di Bruno) to check F(f(v)) = id
std::array<double, 4> compose3(const Jet& outer, const Jet& inner) {
    const double w1 = outer.d[1], w2 = outer.d[2], w3 = outer.d[3];
    const double u1 = inner.d[1], u2 = inner.d[2], u3 = inner.d[3];
    return {outer.d[0], w1 * u1, w2 * u1 * u1 + w1 * u2,
            w3 * u1 * u1 * u1 + 3.0 * w2 * u1 * u2 + w1 * u3};
}

}  // namespace

TEST_CASE("parse_problem_text accepts the reference models") {
    const ProblemSpec std_spec = parse_problem_text(kStandardModel, "burgers");
    CHECK(std_spec.nx == 8000);
    CHECK(std_spec.tau == Catch::Approx(1e-4));
    CHECK(std_spec.eps_list == std::vector<double>{0.1, 0.01});
    CHECK(std_spec.t_end == Catch::Approx(1.8));
    CHECK(std_spec.flux.a.is_identity());
    CHECK(std_spec.flux.b.is_constant());
    CHECK(std_spec.name == "burgers");

    const ProblemSpec gen_spec = parse_problem_text(kGeneralizedModel);
    CHECK(gen_spec.flux.b.is_identity());
    CHECK(gen_spec.flux.c.eval(0.3) == 1.0);
    CHECK(gen_spec.nx == 8000);  // defaults fill the rest
}

TEST_CASE("validation rejects broken model files") {
    SECTION("monotonicity violation names the location") {
        const std::string text = "a = u\nb = 1\nc = 0\nF = x^2\nbranch_lo = -1\nbranch_hi = 1\n";
        try {
            parse_problem_text(text);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("monotone") != std::string::npos);
        }
    }
    SECTION("missing keys") {
        CHECK_THROWS_AS(parse_problem_text("a = u\nb = 1\n"), ValidationError);
    }
    SECTION("unknown key") {
        const std::string text = std::string(kStandardModel) + "bogus = 1\n";
        CHECK_THROWS_AS(parse_problem_text(text), ValidationError);
    }
    SECTION("bad numbers and invariants") {
        auto with = [&](const std::string& kv) {
            return std::string(kGeneralizedModel) + kv + "\n";
        };
        CHECK_THROWS_AS(parse_problem_text(with("nx = 8")), ValidationError);
        CHECK_THROWS_AS(parse_problem_text(with("tau = -0.5")), ValidationError);
        CHECK_THROWS_AS(parse_problem_text(with("eps = 0.1, 0")), ValidationError);
        CHECK_THROWS_AS(parse_problem_text(with("x_min = 30")), ValidationError);
        CHECK_THROWS_AS(parse_problem_text(with("tau = abc")), ValidationError);
    }
    SECTION("expression errors carry the key") {
        const std::string text = "a = u\nb = 1\nc = 0\nF = 1/(1+x^\nbranch_lo = 0\nbranch_hi = 20\n";
        try {
            parse_problem_text(text);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("'F'") != std::string::npos);
        }
    }
    SECTION("degenerate transport velocity") {
        const std::string text = "a = 1\nb = 1\nc = 0\nF = 1/(1+x^2)\nbranch_lo = 0\nbranch_hi = 20\n";
        try {
            parse_problem_text(text);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("a'") != std::string::npos);
        }
    }
    SECTION("branch outside the domain") {
        const std::string text =
            "a = u\nb = 1\nc = 0\nF = 1/(1+x^2)\nbranch_lo = 0\nbranch_hi = 30\n";
        CHECK_THROWS_AS(parse_problem_text(text), ValidationError);
    }
}

TEST_CASE("load_problem reports missing files with the path") {
    try {
        load_problem("/nonexistent/path/to/model.txt");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/path/to/model.txt") != std::string::npos);
    }
}

TEST_CASE("inverse_initial_jet applies the inverse-function identities") {
    const ProblemSpec spec = parse_problem_text(kStandardModel);

    SECTION("reference hump at v = 3/4") {
        const Jet f = inverse_initial_jet(spec.init, 0.75);
        const double s3 = std::sqrt(3.0);
        CHECK(f.d[0] == Catch::Approx(1.0 / s3).epsilon(1e-12));
        CHECK(f.d[1] == Catch::Approx(-8.0 / (3.0 * s3)).epsilon(1e-11));
        CHECK(f.d[2] == Catch::Approx(0.0).margin(1e-9));
        CHECK(f.d[3] == Catch::Approx(-256.0 * s3 / 27.0).epsilon(1e-9));
    }
    SECTION("direct evaluation at v = 1/2") {
        const Jet f = inverse_initial_jet(spec.init, 0.5);
        CHECK(f.d[0] == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(f.d[1] == Catch::Approx(-2.0).epsilon(1e-11));
    }
    SECTION("identity initial data is self-inverse") {
        const std::string text = "a = u\nb = 1\nc = 0\nF = x\nbranch_lo = -5\nbranch_hi = 5\n"
                                 "x_min = -5\nx_max = 5\n";
        const ProblemSpec ident = parse_problem_text(text);
        const Jet f = inverse_initial_jet(ident.init, 0.3);
        CHECK(f.d[0] == Catch::Approx(0.3).margin(1e-13));
        CHECK(f.d[1] == Catch::Approx(1.0).margin(1e-13));
        CHECK(f.d[2] == Catch::Approx(0.0).margin(1e-10));
        CHECK(f.d[3] == Catch::Approx(0.0).margin(1e-8));
    }
    SECTION("v outside the branch range") {
        CHECK_THROWS_AS(inverse_initial_jet(spec.init, 1.5), ValidationError);
        CHECK_THROWS_AS(inverse_initial_jet(spec.init, 1e-5), ValidationError);
    }
    SECTION("F(f(v)) = v across the admissible range") {
        for (int i = 1; i <= 40; ++i) {
            const double v = 0.01 + (0.99 - 0.01) * i / 40.0;
            const Jet f = inverse_initial_jet(spec.init, v);
            REQUIRE(spec.init.F.eval(f.d[0]) == Catch::Approx(v).margin(1e-10));
        }
    }
    SECTION("jet of F composed with jet of f is the identity jet") {
        for (double v : {0.2, 0.5, 0.75, 0.9}) {
            const Jet f = inverse_initial_jet(spec.init, v);
            const Jet F = spec.init.F.eval_jet(f.d[0], 3);
            const auto h = compose3(F, f);
            CHECK(h[0] == Catch::Approx(v).margin(1e-10));
            CHECK(h[1] == Catch::Approx(1.0).margin(1e-8));
            CHECK(h[2] == Catch::Approx(0.0).margin(1e-8));
            CHECK(h[3] == Catch::Approx(0.0).margin(1e-6));
        }
    }
}

TEST_CASE("initial_antiderivative uses the atan fast path only when exact") {
    const ProblemSpec spec = parse_problem_text(kStandardModel);
    const auto Phi = initial_antiderivative(spec.init);
    for (double y : {-3.0, -0.5, 0.0, 1.0, 7.0})
        CHECK(Phi(y) == Catch::Approx(std::atan(y)).margin(1e-12));

    const std::string text = "a = u\nb = 1\nc = 0\nF = -x\nbranch_lo = -5\nbranch_hi = 5\n"
                             "x_min = -5\nx_max = 5\n";
    const ProblemSpec lin = parse_problem_text(text);
    const auto Phi2 = initial_antiderivative(lin.init);
    for (double y : {-2.0, 0.0, 1.5})
        CHECK(Phi2(y) == Catch::Approx(-0.5 * y * y).margin(1e-11));
}
