#include "doctest.h"

#include <array>

#include "redop/construct.hpp"
#include "redop/detsys.hpp"
#include "redop/parse.hpp"
#include "redop/transfer.hpp"

using namespace redop;

namespace {

const Expr t = sym("t"), x = sym("x"), u = sym("u");
const ParabolicEquation heat = ParabolicEquation::heat();

SolutionTuple tuple(const char* a, const char* b, const char* c = "0", ParabolicEquation eq = heat) {
    return SolutionTuple{parse(a), parse(b), parse(c), eq};
}

bool zero(const Expr& e, const ProbeConfig& cfg = {}) { return equals_zero(e, cfg).is_zero(); }

// A few heat solutions used as a basis in property checks.
const std::vector<const char*> heat_basis{"1", "x", "x^2+2*t", "x^3+6*t*x", "exp(t+x)", "exp(t-x)",
                                          "x^4+12*t*x^2+12*t^2"};

}  // namespace

TEST_CASE("wronskian examples") {
    CHECK(wronskian({Expr(1), x}) == Expr(1));
    CHECK(wronskian({Expr(1), parse("x^2+2*t")}) == 2 * x);
    CHECK(wronskian({x, x}).is_zero());
    CHECK(wronskian({Expr(1), x, parse("x^2+2*t")}) == Expr(2));
    CHECK(wronskian({t, t * t}, "t") == t * t);
}

TEST_CASE("operator_from_solutions examples") {
    auto q = operator_from_solutions(tuple("1", "x"));
    CHECK(q.g1.is_zero());
    CHECK(q.g2.is_zero());
    CHECK(q.g3.is_zero());
    q = operator_from_solutions(tuple("1", "x^2+2*t"));
    CHECK(q.g1 == -1 / x);
    CHECK(q.g2.is_zero());
    q = operator_from_solutions(tuple("1", "x", "x^2+2*t"));
    CHECK(q.g3 == Expr(2));
    CHECK_THROWS_AS(operator_from_solutions(tuple("x", "2*x")), ConstructionError);
    CHECK_THROWS(operator_from_solutions(tuple("1", "x^2")));
}

TEST_CASE("construction soundness over heat tuples") {
    auto de1 = derive_DE1(heat);
    for (std::size_t i = 0; i < heat_basis.size(); ++i)
        for (std::size_t j = i + 1; j < heat_basis.size(); ++j) {
            auto tup = tuple(heat_basis[i], heat_basis[j], heat_basis[(j + 1) % heat_basis.size()]);
            CAPTURE(heat_basis[i]);
            CAPTURE(heat_basis[j]);
            auto q = operator_from_solutions(tup);
            CHECK(residual(de1, q, with_singular({}, q.singular)).overall.is_zero());
        }
}

TEST_CASE("property: GL invariance of the tuple construction") {
    const std::vector<std::array<int, 4>> mats{{2, 1, 1, 1}, {0, 1, -1, 0}, {3, -2, 1, 5}, {1, 4, 0, -1}};
    const std::vector<std::array<const char*, 3>> tuples{
        {"1", "x^2+2*t", "0"}, {"x", "x^3+6*t*x", "1"}, {"1", "x", "x^2+2*t"}, {"exp(t+x)", "x", "exp(t-x)"}};
    for (const auto& tp : tuples) {
        auto base = tuple(tp[0], tp[1], tp[2]);
        auto q = operator_from_solutions(base);
        for (const auto& m : mats) {
            for (int a : {0, 3}) {
                SolutionTuple mixed{m[0] * base.v1 + m[1] * base.v2, m[2] * base.v1 + m[3] * base.v2,
                                    base.v3 + a * base.v1 - base.v2, heat};
                auto p = operator_from_solutions(mixed);
                ProbeConfig cfg = with_singular({}, q.singular);
                CAPTURE(tp[0]);
                CAPTURE(tp[1]);
                CHECK(zero(p.g1 - q.g1, cfg));
                CHECK(zero(p.g2 - q.g2, cfg));
                CHECK(zero(p.g3 - q.g3, cfg));
                if (!contains_functions(p.g1) && tp[0][0] != 'e') {
                    CHECK(p.g1 == q.g1);
                    CHECK(p.g3 == q.g3);
                }
            }
        }
    }
}

TEST_CASE("families from Tau1 operators") {
    auto q = operator_from_solutions(tuple("1", "x^2+2*t"));
    auto fam = family_from_operator_tau1(q, tuple("1", "x^2+2*t"));
    CHECK(fam.u == sym("c1") + sym("c2") * parse("x^2+2*t"));
    CHECK(q.apply(fam.u).is_zero());
    auto f2 = family_from_operator_tau1(ReductionOperator::tau1(0, 0, 0), tuple("1", "x"));
    CHECK(f2.u == sym("c1") + sym("c2") * x);
    CHECK_THROWS(family_from_operator_tau1(ReductionOperator::tau1(0, 0, 0), tuple("1", "x^2+2*t")));

    ParseContext ctx;
    auto te = transfer_equation(parse("h(t)", ctx));
    auto qt = canonical_operators(te, sym("kappa"), sym("nu"))[0];
    SolutionTuple tt{Expr(1), x * x + 2 * te.H, 0, te.eq};
    auto ft = family_from_operator_tau1(qt, tt, with_singular({}, te.eq.singular));
    CHECK(zero(apply_L(te.eq, ft.u), with_singular({}, te.eq.singular)));
}

TEST_CASE("eta from a linear family") {
    auto q = eta_from_linear_family(heat, parse("exp(t+x)"), 0);
    CHECK(q.eta == u);
    q = eta_from_linear_family(heat, x, 0);
    CHECK(q.eta == u / x);
    q = eta_from_linear_family(heat, 1, parse("x^2+2*t"));
    CHECK(q.eta == 2 * x);
    CHECK(residual(derive_DE0(heat), eta_from_linear_family(heat, parse("x^3+6*t*x"), parse("exp(t-x)")),
                   with_singular({}, {parse("x^3+6*t*x")}))
              .overall.is_zero());
    CHECK_THROWS(eta_from_linear_family(heat, 0, x));
}

TEST_CASE("eta from a general family") {
    ParseContext ctx;
    ctx.declare_parameter("kappa");
    auto fam = [&](const char* f) { return SolutionFamily{parse(f, ctx), {"kappa"}, heat}; };
    CHECK(eta_from_general_family(fam("kappa*x"), u / x).eta == u / x);
    CHECK(eta_from_general_family(fam("kappa+x^2+2*t"), parse("u-x^2-2*t")).eta == 2 * x);
    CHECK(eta_from_general_family(fam("kappa*exp(t+x)"), parse("u*exp(-t-x)")).eta == u);
    CHECK_THROWS_AS(eta_from_general_family(fam("kappa*x"), u / (2 * x)), ConstructionError);
    CHECK_THROWS_AS(eta_from_general_family(fam("x"), u), ConstructionError);
}

TEST_CASE("Cole-Hopf operators") {
    CHECK(cole_hopf_operator(heat, parse("x^2+2*t")).g1 == -1 / x);
    CHECK(cole_hopf_operator(heat, parse("exp(t+x)")).g1 == Expr(-1));
    ParseContext ctx;
    auto te = transfer_equation(parse("h(t)", ctx));
    auto q = cole_hopf_operator(te.eq, x * x + 2 * te.H);
    CHECK(zero(q.g1 + (te.h + 1) / x, with_singular({}, {x})));
    CHECK_THROWS(cole_hopf_operator(ParabolicEquation{1, 0, 1}, x));
    CHECK_THROWS(cole_hopf_operator(heat, parse("exp(t)")));
    // same as the tuple construction with (v, 1)
    for (const char* v : {"x^2+2*t", "x^3+6*t*x", "exp(t-x)"}) {
        auto a = cole_hopf_operator(heat, parse(v));
        auto b = operator_from_solutions(tuple(v, "1"));
        CHECK(zero(a.g1 - b.g1, with_singular({}, b.singular)));
    }
}

TEST_CASE("Darboux examples") {
    auto d1 = make_darboux(heat, {Expr(1)});
    CHECK(darboux_apply(d1, parse("x^3+6*t*x")) == parse("3*x^2+6*t"));
    auto dpsi = make_darboux(heat, {parse("x^2+2*t")});
    CHECK(equals_zero(darboux_apply(dpsi, parse("x^2+2*t"))).kind == ZeroKind::ProvenZero);
    auto d2 = make_darboux(heat, {Expr(1), x});
    CHECK(darboux_apply(d2, parse("x^2+2*t")) == Expr(2));

    auto e = darboux_transformed_equation(heat, make_darboux(heat, {parse("exp(t+x)")}));
    CHECK(e.A == Expr(1));
    CHECK(e.B.is_zero());
    CHECK(e.C.is_zero());
    e = darboux_transformed_equation(heat, make_darboux(heat, {x}));
    CHECK(e.C == -2 / (x * x));

    auto A = make_function("A", {"t", "x"}), B = make_function("B", {"t", "x"}), C = make_function("C", {"t", "x"});
    ParabolicEquation gen{fn(A), fn(B), fn(C)};
    e = darboux_transformed_equation(gen, DarbouxOperator{{Expr(1)}});
    CHECK(e.B == fn(B) + diff(fn(A), "x"));
    CHECK(e.C == fn(C) + diff(fn(B), "x") + diff(fn(A), "x", 2));
    CHECK_THROWS(make_darboux(heat, {x, 2 * x}));
    CHECK_THROWS(make_darboux(heat, {x * x}));
}

TEST_CASE("property: Darboux intertwining on the heat basis") {
    const std::vector<std::vector<const char*>> seeds{{"x"}, {"exp(t+x)"}, {"x^2+2*t"}, {"1", "x^2+2*t"}, {"x", "exp(t-x)"}};
    for (const auto& s : seeds) {
        std::vector<Expr> es;
        for (const char* p : s) es.push_back(parse(p));
        auto d = make_darboux(heat, es);
        auto eq2 = darboux_transformed_equation(heat, d);
        ProbeConfig cfg = with_singular({}, {d.wronskian()});
        for (const char* b : heat_basis) {
            CAPTURE(b);
            CHECK(zero(apply_L(eq2, darboux_apply(d, parse(b))), cfg));
        }
    }
}

TEST_CASE("property: first-order Darboux agrees with the Tau1 characteristic") {
    // with C = 0 and the tuple (v, 1): Q[u] = -A DT[v, 1](u) on solutions
    for (const char* v : {"x^2+2*t", "x^3+6*t*x", "exp(t+x)"}) {
        auto q = operator_from_solutions(tuple(v, "1"));
        auto d = make_darboux(heat, {parse(v), Expr(1)});
        ProbeConfig cfg = with_singular({}, {d.wronskian()});
        for (const char* b : heat_basis) {
            CAPTURE(v);
            CAPTURE(b);
            Expr ub = parse(b);
            CHECK(zero(q.apply(ub) + darboux_apply(d, ub), cfg));
        }
    }
}
