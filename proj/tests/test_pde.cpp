#include "doctest.h"

#include "redop/detsys.hpp"
#include "redop/equation.hpp"
#include "redop/parse.hpp"
#include "redop/pde.hpp"
#include "redop/transfer.hpp"
#include "redop/transform.hpp"

using namespace redop;

namespace {

const Expr t = sym("t"), x = sym("x");

void check_round_trip(const ParabolicEquation& eq, const GaugeResult& g) {
    ParabolicEquation pushed = push_equation(eq, g.transform, {}, false);
    CHECK(equals_zero(pushed.A - 1).is_zero());
    CHECK(equals_zero(pushed.B).is_zero());
    CHECK(equals_zero(pushed.C + g.reduced.V).is_zero());
}

}  // namespace

TEST_CASE("apply_L on classical solutions") {
    auto heat = ParabolicEquation::heat();
    CHECK(apply_L(heat, parse("x^2+2*t")).is_zero());
    CHECK(equals_zero(apply_L(heat, parse("exp(t+x)"))).kind == ZeroKind::ProvenZero);
    CHECK_FALSE(equals_zero(apply_L(heat, parse("x^2"))).is_zero());
    // hand expansion: L(x^3) for (t, x, 1) is -6 t x - 3 x^3 - x^3
    ParabolicEquation eq{t, x, 1};
    CHECK(apply_L(eq, parse("x^3")) == parse("-6*t*x - 4*x^3"));
}

TEST_CASE("equation validation") {
    ParabolicEquation bad{0, 0, 0};
    CHECK_THROWS_AS(bad.validate(), SignatureMismatch);
    ParabolicEquation with_u{1, sym("u"), 0};
    CHECK_THROWS_AS(with_u.validate(), SignatureMismatch);
    ReducedEquation red{parse("x^2")};
    auto p = red.as_parabolic();
    CHECK(p.A == Expr(1));
    CHECK(p.C == -parse("x^2"));
}

TEST_CASE("gauge: heat equation is already reduced") {
    auto g = gauge_to_reduced(ParabolicEquation::heat());
    CHECK(g.reduced.V.is_zero());
    CHECK(g.transform.T == t);
    CHECK(g.transform.X == x);
    CHECK(g.transform.U1 == Expr(1));
}

TEST_CASE("gauge: constant diffusivity") {
    ParabolicEquation eq{4, 0, 0};
    auto g = gauge_to_reduced(eq);
    CHECK(g.reduced.V.is_zero());
    check_round_trip(eq, g);
}

TEST_CASE("gauge: transfer equation with constant h") {
    for (int h : {1, 2, 3}) {
        auto te = transfer_equation(Expr(h));
        auto g = gauge_to_reduced(te.eq);
        check_round_trip(te.eq, g);
        // V is a multiple of x^-2, so the classifier sees case InverseSquare unless it vanishes
        auto c = classify_lie(g.reduced);
        if (h == 2)
            CHECK(c.kind == LieCaseKind::Free);
        else
            CHECK(c.kind == LieCaseKind::InverseSquare);
    }
}

TEST_CASE("gauge: drift and potential") {
    ParabolicEquation eq{1, parse("2*t + x"), parse("x")};
    auto g = gauge_to_reduced(eq);
    check_round_trip(eq, g);
}

TEST_CASE("gauge: non-quadrable diffusivity needs hints") {
    auto A = make_function("A", {"t", "x"});
    ParabolicEquation eq{fn(A), 0, 0};
    CHECK_THROWS_AS(gauge_to_reduced(eq), NonQuadrable);
}

TEST_CASE("classify_lie examples") {
    CHECK(classify_lie({Expr(0)}).kind == LieCaseKind::Free);
    auto c = classify_lie({parse("5/x^2")});
    CHECK(c.kind == LieCaseKind::InverseSquare);
    CHECK(c.mu == Expr(5));
    CHECK(classify_lie({parse("exp(x)")}).kind == LieCaseKind::Stationary);
    CHECK(classify_lie({parse("t*x")}).kind == LieCaseKind::Kernel);
    ParseContext ctx;
    ctx.declare_parameter("mu");
    CHECK(classify_lie({parse("mu*x^(-2)", ctx)}).kind == LieCaseKind::InverseSquare);
}

TEST_CASE("classify_lie is invariant under canonically equal inputs") {
    CHECK(classify_lie({parse("(x+1)^2 - x^2 - 2*x - 1")}).kind == LieCaseKind::Free);
    CHECK(classify_lie({parse("(5*t)/(t*x^2)")}).kind == LieCaseKind::InverseSquare);
    CHECK(classify_lie({parse("exp(x) + t - t")}).kind == LieCaseKind::Stationary);
}
