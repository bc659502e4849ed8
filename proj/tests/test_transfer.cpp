#include "doctest.h"

#include <cmath>

#include "redop/detsys.hpp"
#include "redop/parse.hpp"
#include "redop/transfer.hpp"

using namespace redop;

namespace {

const Expr t = sym("t"), x = sym("x"), u = sym("u");

bool zero(const Expr& e, const ProbeConfig& cfg = {}) { return equals_zero(e, cfg).is_zero(); }

FuncTable h_equals(double c1, double c0) {
    // h(t) = c1 t + c0
    FuncTable f;
    f.set_univariate("h", {[=](double s) { return c1 * s + c0; }, [=](double) { return c1; }, [](double) { return 0.0; }});
    return f;
}

}  // namespace

TEST_CASE("transfer equation embedding") {
    auto te0 = transfer_equation(0);
    CHECK(te0.eq.A == Expr(1));
    CHECK(te0.eq.B.is_zero());
    CHECK(te0.eq.C.is_zero());
    CHECK(transfer_equation(2).eq.B == 2 / x);
    ParseContext ctx;
    auto te = transfer_equation(parse("h(t)", ctx));
    CHECK(te.eq.B == parse("h(t)", ctx) / x);
    REQUIRE_FALSE(te.eq.singular.empty());
    CHECK(te.eq.singular[0] == x);
    CHECK(diff(te.H, "t") == parse("h(t)+1", ctx));
    CHECK_THROWS_AS(transfer_equation(x), SignatureMismatch);
    CHECK_THROWS_AS(transfer_equation(u), SignatureMismatch);
}

TEST_CASE("canonical operators") {
    auto ops0 = canonical_operators(transfer_equation(0), sym("kappa"), sym("nu"));
    CHECK(ops0[0].g1 == -1 / x);
    ParseContext ctx;
    auto te = transfer_equation(parse("h(t)", ctx));
    auto ops = canonical_operators(te, sym("kappa"), 0);
    CHECK(ops[1].eta == -x * u / (2 * t + sym("kappa")));
    CHECK(ops[2].eta.is_zero());
    ProbeConfig cfg = with_singular({}, te.eq.singular);
    CHECK(residual(derive_DE1(te.eq), ops[0], cfg).overall.kind == ZeroKind::ProvenZero);
    CHECK(residual(derive_DE0(te.eq), ops[1], cfg).overall.kind == ZeroKind::ProvenZero);
    auto opsnu = canonical_operators(te, sym("kappa"), sym("nu"));
    CHECK(residual(derive_DE0(te.eq), opsnu[2], cfg).overall.kind == ZeroKind::ProvenZero);
}

TEST_CASE("G_kappa invariant solutions") {
    Expr c1 = sym("c1");
    auto heat_kernel = invariant_solution_Gk(transfer_equation(0), 0, c1);
    CHECK(zero(heat_kernel.u - c1 * pow(t, num(-1, 2)) * exp(-x * x / (4 * t))));
    auto h3 = invariant_solution_Gk(transfer_equation(3), 0, c1);
    CHECK(zero(h3.u - c1 * pow(t, Rational(-2)) * exp(-x * x / (4 * t))));

    ParseContext ctx;
    auto te = transfer_equation(parse("h(t)", ctx));
    auto fam = invariant_solution_Gk(te, sym("kappa"), c1);
    ProbeConfig cfg = with_singular({}, fam.source.singular);
    cfg.funcs = h_equals(1, 0);
    CHECK(zero(apply_L(te.eq, fam.u), cfg));
    auto ops = canonical_operators(te, sym("kappa"), 0);
    CHECK(zero(ops[1].apply(fam.u), cfg));
}

TEST_CASE("declared quadrature evaluates to the closed-form integral") {
    ParseContext ctx;
    auto te = transfer_equation(parse("h(t)", ctx));
    Expr R = gaussian_quadrature(te, sym("kappa"));
    REQUIRE(contains_functions(R));
    FuncTable f = h_equals(1, 0);
    const double kappa = 0.7;
    for (double tt : {0.4, 1.0, 1.9}) {
        // int_1^t (s+1)/(2s+kappa) ds
        double want = (tt - 1) / 2 + (1 - kappa / 2) / 2 * std::log((2 * tt + kappa) / (2 + kappa));
        CHECK(eval(R, {{"t", tt}, {"kappa", kappa}}, &f) == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("polynomial series, worked cases") {
    Expr h = sym("h");
    auto s1 = polynomial_series(transfer_equation(h), 1);
    Expr a0 = sym("a0"), a1 = sym("a1"), a2 = sym("a2");
    CHECK(s1.u == a1 * x * x + 2 * a1 * (h + 1) * t + a0);
    CHECK(polynomial_series(transfer_equation(h), 0).u == a0);
    auto s2 = polynomial_series(transfer_equation(0), 2);
    CHECK(s2.u == a2 * (pow(x, Rational(4)) + 12 * t * x * x + 12 * t * t) + a1 * (x * x + 2 * t) + a0);
}

TEST_CASE("Gaussian series, worked cases") {
    auto g0 = gaussian_series(transfer_equation(0), 0, 0);
    auto k = invariant_solution_Gk(transfer_equation(0), 0, sym("a0"));
    CHECK(zero(g0.u - k.u));
    Expr h = sym("h");
    auto te = transfer_equation(h);
    auto g1 = gaussian_series(te, 1, 0);
    ProbeConfig cfg = with_singular({}, {x, t});
    CHECK(zero(apply_L(te.eq, g1.u), cfg));
    for (const auto& r : series_recurrence_residuals(te, g1)) CHECK(equals_zero(r, cfg).kind == ZeroKind::ProvenZero);
}

TEST_CASE("series with symbolic h pass for h(t) = 1 and h(t) = t") {
    ParseContext ctx;
    auto te = transfer_equation(parse("h(t)", ctx));
    for (int N = 0; N <= 2; ++N) {
        auto p = polynomial_series(te, N);
        auto g = gaussian_series(te, N, sym("kappa"));
        for (const auto& f : {h_equals(0, 1), h_equals(1, 0)}) {
            ProbeConfig cfg = with_singular({}, {x, 2 * t + sym("kappa")});
            cfg.funcs = f;
            cfg.points = 8;
            CHECK(zero(apply_L(te.eq, p.u), cfg));
            CHECK(zero(apply_L(te.eq, g.u), cfg));
        }
        for (const auto& r : series_recurrence_residuals(te, p)) CHECK(r.is_zero());
        for (const auto& r : series_recurrence_residuals(te, g)) CHECK(zero(r, with_singular({}, {2 * t + sym("kappa")})));
    }
    CHECK_THROWS(polynomial_series(te, -1));
}
