#include "doctest.h"

#include "redop/detsys.hpp"
#include "redop/parse.hpp"
#include "redop/transfer.hpp"

using namespace redop;

namespace {

const Expr t = sym("t"), x = sym("x"), u = sym("u");

ParseContext unknowns_ctx() {
    ParseContext ctx;
    ctx.declare_function(g_function(1)).declare_function(g_function(2)).declare_function(g_function(3));
    ctx.declare_function(eta_function());
    ctx.declare_parameter("c0").declare_parameter("kappa").declare_parameter("mu");
    return ctx;
}

bool same_up_to_sign(const Expr& a, const Expr& b) { return (a - b).is_zero() || (a + b).is_zero(); }

}  // namespace

TEST_CASE("DE1 of u_t = u_xx + c0 u, third equation by hand") {
    ParseContext ctx = unknowns_ctx();
    ParabolicEquation eq{1, 0, sym("c0")};
    auto sys = derive_DE1(eq);
    REQUIRE(sys.equations.size() == 3);
    Expr want = parse("g3_t - g3_xx + 2*g1_x*g3 - c0*g3", ctx);
    CHECK(same_up_to_sign(sys.equations[2], want));
}

TEST_CASE("DE1 of the heat equation, second equation") {
    ParseContext ctx = unknowns_ctx();
    auto sys = derive_DE1(ParabolicEquation::heat());
    CHECK(same_up_to_sign(sys.equations[1], parse("g2_t - g2_xx + 2*g1_x*g2", ctx)));
    CHECK(same_up_to_sign(sys.equations[0], parse("g1_t - g1_xx + 2*g1*g1_x + 2*g2_x", ctx)));
}

TEST_CASE("DE0 of the transfer equation") {
    ParseContext ctx = unknowns_ctx();
    auto h = make_function("h", {"t"});
    ctx.declare_function(h);
    auto te = transfer_equation(fn(h));
    auto sys = derive_DE0(te.eq);
    REQUIRE(sys.equations.size() == 1);
    Expr eta = fn(eta_function());
    Expr want = parse("eta_t - eta_xx - 2*eta*eta_xu - eta^2*eta_uu", ctx) - fn(h) * diff(eta / x, "x");
    CHECK(same_up_to_sign(sys.equations[0], want));
}

TEST_CASE("residual examples") {
    auto heat = ParabolicEquation::heat();
    auto r = residual(derive_DE1(heat), ReductionOperator::tau1(0, 0, 0));
    CHECK(r.overall.kind == ZeroKind::ProvenZero);

    auto h = make_function("h", {"t"});
    auto te = transfer_equation(fn(h));
    auto q = ReductionOperator::tau1(-(fn(h) + 1) / x, 0, 0);
    CHECK(residual(derive_DE1(te.eq), q).overall.kind == ZeroKind::ProvenZero);

    ParseContext ctx = unknowns_ctx();
    Expr eta = parse("-x*(u+mu)/(2*(t+kappa))", ctx);
    CHECK(residual(derive_DE0(te.eq), ReductionOperator::tau0(eta)).overall.kind == ZeroKind::ProvenZero);

    CHECK(residual(derive_DE0(heat), ReductionOperator::tau0(u / x)).overall.kind == ZeroKind::ProvenZero);
    auto bad = residual(derive_DE0(heat), ReductionOperator::tau0(x * u));
    CHECK(bad.overall.kind == ZeroKind::NonZero);
    CHECK_FALSE(bad.overall.witness.empty());
}

TEST_CASE("residual rejects mismatched candidates") {
    Bindings b;
    b.bind_function("g1", u).bind_function("g2", Expr(0)).bind_function("g3", Expr(0));
    CHECK_THROWS_AS(residual(derive_DE1(ParabolicEquation::heat()), b), SignatureMismatch);
    CHECK_THROWS(residual(derive_DE1(ParabolicEquation::heat()), ReductionOperator::tau0(u)));
}

TEST_CASE("operator normalization") {
    // 2t dx - x u du is the Tau0 operator with eta = -x u / (2t)
    auto g = ReductionOperator::from_general(0, 2 * t, -x * u);
    CHECK(g.form == ReductionOperator::Form::Tau0);
    CHECK(g.eta == -x * u / (2 * t));
    auto q = ReductionOperator::from_general(2 * t, x, 0);
    CHECK(q.form == ReductionOperator::Form::Tau1);
    CHECK(q.g1 == x / (2 * t));
    CHECK_THROWS_AS(ReductionOperator::from_general(0, 0, u), ConstructionError);
    CHECK_THROWS_AS(ReductionOperator::tau1(u, 0, 0), SignatureMismatch);
    CHECK_THROWS_AS(ReductionOperator::from_general(1, 0, u * u), SignatureMismatch);
}

TEST_CASE("property: normalization is a quotient by nonvanishing multipliers") {
    const std::vector<Expr> lambdas{1 + x * x, exp(u), 2 + t, num(-3, 2), exp(t * x) * (1 + u * u)};
    const std::vector<std::array<Expr, 3>> ops{
        {0, 2 * t, -x * u}, {0, 1, u / x}, {0, 1 + x, t * u * u}, {1, x, u + t}, {2 * t, x, 0}};
    for (const auto& op : ops)
        for (const auto& lam : lambdas) {
            auto a = ReductionOperator::from_general(op[0], op[1], op[2]);
            ReductionOperator b;
            try {
                b = ReductionOperator::from_general(lam * op[0], lam * op[1], lam * op[2]);
            } catch (const SignatureMismatch&) {
                // exp(u) times a Tau1 field is not affine in u, which is expected
                CHECK_FALSE(op[0].is_zero());
                continue;
            }
            REQUIRE(a.form == b.form);
            if (a.form == ReductionOperator::Form::Tau0)
                CHECK(equals_zero(a.eta - b.eta).is_zero());
            else
                CHECK(equals_zero(a.g1 - b.g1 + a.g2 - b.g2 + a.g3 - b.g3).is_zero());
        }
}

TEST_CASE("conditional invariance agrees with determining systems") {
    auto heat = ParabolicEquation::heat();
    struct Case {
        ReductionOperator q;
        bool zero;
    };
    std::vector<Case> cases{
        {ReductionOperator::from_general(0, 2 * t, -x * u), true},
        {ReductionOperator::tau1(0, 0, 0), true},
        {ReductionOperator::tau1(x / (2 * t), 0, 0), true},
        {ReductionOperator::tau0(u / x), true},
        {ReductionOperator::tau0(x * u), false},
        {ReductionOperator::tau1(x, 0, 0), false},
        {ReductionOperator::tau1(0, 0, x * x), false},
    };
    for (const auto& c : cases) {
        CAPTURE(c.q.to_string());
        auto sys = c.q.form == ReductionOperator::Form::Tau1 ? derive_DE1(heat) : derive_DE0(heat);
        bool by_residual = residual(sys, c.q).overall.is_zero();
        bool by_criterion = check_conditional_invariance(heat, c.q).verdict.is_zero();
        CHECK(by_residual == c.zero);
        CHECK(by_criterion == c.zero);
    }
}

TEST_CASE("conditional invariance on the transfer equation") {
    auto h = make_function("h", {"t"});
    auto te = transfer_equation(fn(h));
    auto ops = canonical_operators(te, sym("kappa"), sym("nu"));
    for (const auto& q : ops) {
        CAPTURE(q.to_string());
        CHECK(check_conditional_invariance(te.eq, q, with_singular({}, te.eq.singular)).verdict.is_zero());
    }
}

TEST_CASE("operator printing") {
    CHECK(ReductionOperator::tau0(u / x).to_string().find("dx") != std::string::npos);
    auto q = ReductionOperator::tau1(x, 1, t);
    // characteristic phi - tau u_t - xi u_x
    CHECK(q.apply(x * x) == t - x * x);
}
