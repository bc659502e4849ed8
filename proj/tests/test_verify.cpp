#include "doctest.h"

#include <cmath>

#include "redop/detsys.hpp"
#include "redop/parse.hpp"
#include "redop/verify.hpp"

using namespace redop;

namespace {
const Expr t = sym("t"), x = sym("x"), u = sym("u");
const ParabolicEquation heat = ParabolicEquation::heat();
}  // namespace

TEST_CASE("grid points are deterministic and respect exclusions") {
    Grid g;
    g.per_axis = 5;
    auto a = g.points({"t", "x"});
    auto b = g.points({"t", "x"});
    CHECK(a.size() == 25);
    CHECK(a == b);
    g.boxes["x"] = {-1, 1};
    g.excluded = {x};
    for (const auto& p : g.points({"t", "x"})) CHECK(std::fabs(p.at("x")) >= g.band);
    g.per_axis = 1;
    CHECK_THROWS(g.points({"x"}));
}

TEST_CASE("grid residual of the heat equation") {
    Grid g;
    auto ok = grid_residual(heat, parse("exp(t+x)"), g);
    REQUIRE(ok.checks.size() == 1);
    CHECK(ok.all_pass());
    CHECK(ok.checks[0].points == 400);
    CHECK(ok.checks[0].max_residual < 1e-12);
    auto bad = grid_residual(heat, parse("exp(t+2*x)"), g);
    CHECK_FALSE(bad.all_pass());
    CHECK_FALSE(bad.checks[0].witness.empty());
    // the witness reproduces a residual of -3 exp(t + 2x)
    auto w = bad.checks[0].witness;
    CHECK(std::fabs(eval(apply_L(heat, parse("exp(t+2*x)")), w)) == doctest::Approx(3 * std::exp(w["t"] + 2 * w["x"])));
}

TEST_CASE("grid residual refuses an empty effective grid") {
    Grid g;
    g.boxes["x"] = {-0.05, 0.05};
    g.excluded = {x};
    CHECK_THROWS(grid_residual(heat, parse("x^2+2*t"), g));
}

TEST_CASE("grid residual of a determining system") {
    Grid g;
    g.per_axis = 8;
    auto de0 = derive_DE0(heat);
    CHECK(grid_residual(de0, ReductionOperator::tau0(u / x).as_bindings(), g).all_pass());
    CHECK_FALSE(grid_residual(de0, ReductionOperator::tau0(x * u).as_bindings(), g).all_pass());
}

TEST_CASE("grid and probing agree in verdict") {
    const std::vector<const char*> candidates{"x^2+2*t", "exp(t+x)", "exp(t+2*x)", "x^3", "x^3+6*t*x", "t*x"};
    Grid g;
    g.per_axis = 6;
    for (const char* c : candidates) {
        CAPTURE(c);
        Expr e = parse(c);
        CHECK(grid_residual(heat, e, g).all_pass() == equals_zero(apply_L(heat, e)).is_zero());
    }
}

TEST_CASE("finite-difference cross-checks") {
    Grid g;
    g.per_axis = 10;
    CHECK(fd_crosscheck(parse("x^2+2*t"), g).all_pass());
    CHECK(fd_crosscheck(parse("exp(-x^2/(4*t))"), g).all_pass());
    g.boxes["x"] = {-1, 1};
    g.excluded = {x};
    auto r = fd_crosscheck(1 / x, g);
    CHECK(r.all_pass());
    CHECK(r.checks[0].points > 0);
}

TEST_CASE("report formats") {
    VerificationReport rep;
    rep.add(verdict_check("a", equals_zero(Expr(0))));
    rep.add(verdict_check("b", equals_zero(x - t)));
    CHECK_FALSE(rep.all_pass());
    std::string m = rep.machine();
    CHECK(m.find("a\tPASS\tProvenZero\t0.000000e+00\t") == 0);
    CHECK(m.find("b\tFAIL\tNonZero\t") != std::string::npos);
    CHECK(rep.text().find("1/2 checks passed") != std::string::npos);
    CHECK(verdict_check("c", equals_zero(x - t), false).pass);
    CHECK(tolerance_for(Tolerance::Exact) == 1e-8);
    CHECK(tolerance_for(Tolerance::Quadrature) == 1e-4);
}

TEST_CASE("reports are reproducible") {
    Grid g;
    g.per_axis = 6;
    auto a = grid_residual(heat, parse("exp(t+2*x)"), g).machine();
    auto b = grid_residual(heat, parse("exp(t+2*x)"), g).machine();
    CHECK(a == b);
}
