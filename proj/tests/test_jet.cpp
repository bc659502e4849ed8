#include "doctest.h"

#include "redop/jet.hpp"

using namespace redop;

TEST_CASE("jet names sort letters by independent index") {
    JetSpace js({"t", "x"}, {"u"});
    CHECK(js.jet_name(0, {1, 1}) == "u_tx");
    CHECK(js.jet("u", "xt") == js.jet("u", "tx"));
    CHECK(js.jet(0, {0, 0}) == sym("u"));
    auto p = js.parse_jet("u_txx");
    REQUIRE(p);
    CHECK(p->second == std::vector<int>{1, 2});
    CHECK_FALSE(js.parse_jet("v_t"));
}

TEST_CASE("total derivatives") {
    JetSpace js({"t", "x"}, {"u"});
    Expr u = sym("u"), ux = js.jet("u", "x");
    // D_x(x u u_x) = u u_x + x u_x^2 + x u u_xx
    Expr got = js.total_derivative(sym("x") * u * ux, 1);
    Expr want = u * ux + sym("x") * ux * ux + sym("x") * u * js.jet("u", "xx");
    CHECK(got == want);
    CHECK(js.total_derivative(ux, {1, 1}) == js.jet("u", "txx"));
}

TEST_CASE("to_jets replaces dependent applications") {
    JetSpace js({"t", "x"}, {"v"});
    auto v = make_function("v", {"t", "x"});
    Expr in = diff(fn(v), "x") * fn(v) + diff(fn(v), std::vector<std::string>{"t", "x"});
    CHECK(js.to_jets(in) == js.jet("v", "x") * sym("v") + js.jet("v", "tx"));
}

TEST_CASE("prolongation of translations and scalings") {
    JetSpace js({"t", "x"}, {"u"});
    Expr uxx = js.jet("u", "xx"), ut = js.jet("u", "t");
    // translation in x leaves the heat operator invariant
    VectorField dx{{Expr(0), Expr(1)}, {Expr(0)}};
    CHECK(prolong_apply(js, dx, ut - uxx).is_zero());
    // dilation 2t dt + x dx: pr(u_t - u_xx) = -2 (u_t - u_xx)
    VectorField D{{2 * sym("t"), sym("x")}, {Expr(0)}};
    CHECK(prolong_apply(js, D, ut - uxx) == -2 * (ut - uxx));
    // characteristic of D
    CHECK(characteristic(js, D, 0) == -2 * sym("t") * ut - sym("x") * js.jet("u", "x"));
}

TEST_CASE("reduce_by_rules with extension") {
    JetSpace js({"t", "x"}, {"u"});
    Expr ux = js.jet("u", "x");
    // u_t := u_xx extended: u_tx becomes u_xxx
    std::vector<JetRule> rules{{0, {1, 0}, js.jet("u", "xx"), true}};
    CHECK(reduce_by_rules(js, js.jet("u", "tx") + ux, rules) == js.jet("u", "xxx") + ux);
    // without extension only the ruled jet itself changes
    std::vector<JetRule> plain{{0, {1, 0}, js.jet("u", "xx"), false}};
    CHECK(reduce_by_rules(js, js.jet("u", "tx"), plain) == js.jet("u", "tx"));
}
