#include "doctest.h"

#include <sstream>

#include "redop/io.hpp"

using namespace redop;

namespace {
const Expr t = sym("t"), x = sym("x"), u = sym("u");

Block block(const std::string& text, ParseContext& ctx) {
    std::istringstream in(text);
    return read_block(in, ctx);
}
}  // namespace

TEST_CASE("equation blocks") {
    ParseContext ctx;
    auto b = block("# transfer\nh: (t)\nsingular: x\nA = 1\nB = h(t)/x  # drift\n", ctx);
    auto in = equation_from_block(b, ctx);
    CHECK_FALSE(in.reduced);
    CHECK(in.eq.A == Expr(1));
    CHECK(in.eq.B == fn(ctx.functions.at("h")) / x);
    REQUIRE(in.eq.singular.size() == 1);
    CHECK(in.eq.singular[0] == x);
}

TEST_CASE("reduced equation blocks and parameters") {
    ParseContext ctx;
    auto in = equation_from_block(block("param mu, nu\nV = mu/x^2\n", ctx), ctx);
    CHECK(in.reduced);
    CHECK(in.eq.C == -sym("mu") / (x * x));
    ParseContext c2;
    CHECK_THROWS_AS(equation_from_block(block("V = x\nA = 2\n", c2), c2), ParseError);
    ParseContext c3;
    CHECK_THROWS_AS(equation_from_block(block("D = x\n", c3), c3), ParseError);
    ParseContext c4;
    CHECK_THROWS_AS(block("A 1\n", c4), ParseError);
    ParseContext c5;
    CHECK_THROWS_AS(equation_from_block(block("A = 0\n", c5), c5), SignatureMismatch);
}

TEST_CASE("declarations with derivative rules") {
    ParseContext ctx;
    auto in = equation_from_block(block("h: (t)\nH: (t), H_t = h(t) + 1\nA = 1\nC = H(t)\n", ctx), ctx);
    CHECK(diff(in.eq.C, "t") == fn(ctx.functions.at("h")) + 1);
}

TEST_CASE("transformation blocks") {
    ParseContext ctx;
    auto p = transformation_from_block(block("T = 4*t\nX = 2*x\nU1 = exp(-x)\nXinv = x/2\n", ctx), ctx);
    CHECK(p.T == 4 * t);
    CHECK(p.U1 == exp(-x));
    REQUIRE(p.Xinv);
    CHECK(*p.Xinv == x / 2);
    CHECK_FALSE(p.Tinv);
    ParseContext c2;
    CHECK_THROWS_AS(transformation_from_block(block("Y = 1\n", c2), c2), ParseError);
    ParseContext c3;
    CHECK_THROWS_AS(read_block_file("/nonexistent/file.eq", c3), ParseError);
}

TEST_CASE("operator syntax") {
    ParseContext ctx;
    auto q = parse_operator("dt - (h(t)+1)/x*dx", ctx);
    CHECK(q.form == ReductionOperator::Form::Tau1);
    CHECK(q.g1 == -(fn(ctx.functions.at("h")) + 1) / x);
    auto g = parse_operator("2*t*dx - x*u*du", ctx);
    CHECK(g.form == ReductionOperator::Form::Tau0);
    CHECK(g.eta == -x * u / (2 * t));
    CHECK_THROWS_AS(parse_operator("dt*dx", ctx), ParseError);
    CHECK_THROWS_AS(parse_operator("dt + 1", ctx), ParseError);
    auto inf = parse_infinitesimal("4*t^2*dt + 4*t*x*dx - (x^2+2*t)*u*du", ctx);
    CHECK(inf.tau == 4 * t * t);
    CHECK(inf.zeta1 == -(x * x + 2 * t));
    CHECK(inf.zeta0.is_zero());
    CHECK_THROWS_AS(parse_infinitesimal("dx + u^2*du", ctx), SignatureMismatch);
    // dt, dx, du are ordinary names outside operator parsing
    CHECK_THROWS(parse("dt + 1", ctx));
}

TEST_CASE("lists and machine output") {
    ParseContext ctx;
    auto l = parse_list("1; x^2+2*t ;0", ctx);
    REQUIRE(l.size() == 3);
    CHECK(l[2].is_zero());
    CHECK_THROWS_AS(parse_list("1;;x", ctx), ParseError);
    CHECK(operator_machine(ReductionOperator::tau0(u / x)).rfind("form\tTau0\neta\t", 0) == 0);
    CHECK(operator_machine(ReductionOperator::tau1(x, 0, 0)).find("g1\tx\n") != std::string::npos);
}
