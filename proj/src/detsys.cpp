#include "redop/detsys.hpp"

#include <sstream>

namespace redop {

namespace {

const Expr T = sym("t");
const Expr X = sym("x");
const Expr U = sym("u");

Expr d(const FunctionRef& f, const std::string& letters) {
    std::vector<int> o(f->params.size(), 0);
    for (char c : letters)
        for (std::size_t k = 0; k < f->params.size(); ++k)
            if (f->params[k] == std::string(1, c)) o[k] += 1;
    std::vector<Expr> args;
    for (const auto& p : f->params) args.push_back(sym(p));
    return fn(f, o, args);
}

bool vanishes(const Expr& e, const ProbeConfig& cfg) { return equals_zero(e, cfg).is_zero(); }

}  // namespace

const FunctionRef& g_function(int i) {
    static const FunctionRef g[3] = {make_function("g1", {"t", "x"}), make_function("g2", {"t", "x"}),
                                     make_function("g3", {"t", "x"})};
    return g[i - 1];
}

const FunctionRef& eta_function() {
    static const FunctionRef e = make_function("eta", {"t", "x", "u"});
    return e;
}

ProbeConfig with_singular(ProbeConfig cfg, const std::vector<Expr>& extra) {
    for (const auto& s : extra) cfg.singular.push_back(s);
    return cfg;
}

// ---- ReductionOperator ------------------------------------------------------

ReductionOperator ReductionOperator::tau1(Expr g1, Expr g2, Expr g3) {
    for (const auto* c : {&g1, &g2, &g3})
        if (depends_on(*c, "u")) throw SignatureMismatch("Tau1 coefficients must not depend on u");
    ReductionOperator q;
    q.form = Form::Tau1;
    q.g1 = std::move(g1);
    q.g2 = std::move(g2);
    q.g3 = std::move(g3);
    return q;
}

ReductionOperator ReductionOperator::tau0(Expr eta) {
    ReductionOperator q;
    q.form = Form::Tau0;
    q.eta = std::move(eta);
    return q;
}

ReductionOperator ReductionOperator::from_general(const Expr& tau, const Expr& xi, const Expr& eta,
                                                  const ProbeConfig& cfg) {
    if (!vanishes(tau, cfg)) {
        if (depends_on(tau, "u") || depends_on(xi, "u"))
            throw SignatureMismatch("operator with u-dependent tau or xi is not reducible to the Tau1 form here");
        Expr g1 = xi / tau;
        Expr e = eta / tau;
        Expr g2 = diff(e, "u");
        Expr g3 = e - g2 * U;
        if (depends_on(g2, "u") && !vanishes(diff(g2, "u"), cfg))
            throw SignatureMismatch("Tau1 operator must be affine in u");
        g2 = substitute(g2, "u", 0);
        g3 = substitute(g3, "u", 0);
        auto q = tau1(g1, g2, g3);
        q.singular.push_back(tau);
        return q;
    }
    if (vanishes(xi, cfg)) throw ConstructionError("operator with tau = xi = 0 is not a reduction operator");
    auto q = tau0(eta / xi);
    q.singular.push_back(xi);
    return q;
}

Expr ReductionOperator::tau() const { return form == Form::Tau1 ? Expr(1) : Expr(0); }
Expr ReductionOperator::xi() const { return form == Form::Tau1 ? g1 : Expr(1); }
Expr ReductionOperator::phi() const { return form == Form::Tau1 ? g2 * U + g3 : eta; }

VectorField ReductionOperator::vector_field() const { return VectorField{{tau(), xi()}, {phi()}}; }

Expr ReductionOperator::characteristic() const {
    JetSpace js({"t", "x"}, {"u"});
    return redop::characteristic(js, vector_field(), 0);
}

Expr ReductionOperator::apply(const Expr& u) const {
    Expr ph = substitute(phi(), "u", u);
    return ph - tau() * diff(u, "t") - xi() * diff(u, "x");
}

Bindings ReductionOperator::as_bindings() const {
    Bindings b;
    if (form == Form::Tau1) {
        b.bind_function("g1", g1).bind_function("g2", g2).bind_function("g3", g3);
    } else {
        b.bind_function("eta", eta);
    }
    return b;
}

std::string ReductionOperator::to_string() const {
    std::ostringstream os;
    if (form == Form::Tau1) {
        os << "dt + (" << g1 << ")*dx + ((" << g2 << ")*u + " << g3 << ")*du";
    } else {
        os << "dx + (" << eta << ")*du";
    }
    return os.str();
}

// ---- determining systems ------------------------------------------------------

JetSpace DeterminingSystem::jet_space() const {
    if (kind == SystemKind::DE1) return JetSpace({"t", "x"}, {"g1", "g2", "g3"});
    return JetSpace({"t", "x", "u"}, {"eta"});
}

std::vector<Expr> DeterminingSystem::in_jets() const {
    JetSpace js = jet_space();
    std::vector<Expr> out;
    for (const auto& e : equations) out.push_back(js.to_jets(e));
    return out;
}

std::vector<JetRule> DeterminingSystem::evolution_rules() const {
    JetSpace js = jet_space();
    auto eqs = in_jets();
    std::vector<JetRule> rules;
    for (std::size_t a = 0; a < eqs.size(); ++a) {
        std::vector<int> alpha(js.independents().size(), 0);
        alpha[0] = 1;
        Expr lead = js.jet(a, alpha);
        Expr rhs = lead - eqs[a];
        if (depends_on(rhs, js.jet_name(a, alpha)) || !(diff(eqs[a], lead.name()) == Expr(1)))
            throw EliminationFailure("equation is not in evolution form");
        rules.push_back(JetRule{a, alpha, rhs, true});
    }
    return rules;
}

std::string DeterminingSystem::to_string() const {
    std::ostringstream os;
    for (const auto& e : equations) os << e << " = 0\n";
    return os.str();
}

DeterminingSystem derive_DE1(const ParabolicEquation& eq) {
    eq.validate();
    const Expr &A = eq.A, &B = eq.B, &C = eq.C;
    const auto &G1 = g_function(1), &G2 = g_function(2), &G3 = g_function(3);
    Expr g1 = fn(G1), g2 = fn(G2), g3 = fn(G3);
    Expr A_x = diff(A, "x"), A_t = diff(A, "t");
    Expr K = 2 * d(G1, "x") - (A_x / A) * g1 - A_t / A;
    DeterminingSystem sys;
    sys.kind = SystemKind::DE1;
    sys.source = eq;
    sys.equations.push_back(add({d(G1, "t"), -(A * d(G1, "xx")), -(B * d(G1, "x")), K * (g1 + B),
                                 diff(B, "x") * g1, 2 * A * d(G2, "x"), diff(B, "t")}));
    sys.equations.push_back(add({d(G2, "t"), -(A * d(G2, "xx")), -(B * d(G2, "x")), K * (g2 - C),
                                 -(diff(C, "x") * g1), -diff(C, "t")}));
    sys.equations.push_back(
        add({d(G3, "t"), -(A * d(G3, "xx")), -(B * d(G3, "x")), K * g3, -(C * g3)}));
    return sys;
}

DeterminingSystem derive_DE0(const ParabolicEquation& eq) {
    eq.validate();
    const Expr &A = eq.A, &B = eq.B, &C = eq.C;
    const auto& E = eta_function();
    Expr eta = fn(E);
    Expr rhs = add({A * (d(E, "xx") + 2 * eta * d(E, "xu") + eta * eta * d(E, "uu")),
                    diff(A, "x") * (d(E, "x") + eta * d(E, "u")), diff(B, "x") * eta + B * d(E, "x"),
                    C * (eta - U * d(E, "u")), diff(C, "x") * U});
    DeterminingSystem sys;
    sys.kind = SystemKind::DE0;
    sys.source = eq;
    sys.equations.push_back(d(E, "t") - rhs);
    return sys;
}

ResidualReport residual(const DeterminingSystem& sys, const Bindings& candidate, const ProbeConfig& cfg) {
    if (sys.kind == SystemKind::DE1) {
        for (const auto& [name, b] : candidate.functions)
            if (depends_on(b.body, "u")) throw SignatureMismatch("candidate for " + name + " depends on u");
    }
    ProbeConfig c = with_singular(cfg, sys.source.singular);
    ResidualReport rep;
    for (const auto& e : sys.equations) {
        Expr r = substitute(e, candidate);
        rep.residuals.push_back(r);
        rep.verdicts.push_back(equals_zero(r, c));
    }
    rep.overall = combine(rep.verdicts);
    return rep;
}

ResidualReport residual(const DeterminingSystem& sys, const ReductionOperator& op, const ProbeConfig& cfg) {
    bool want_tau1 = sys.kind == SystemKind::DE1;
    if (want_tau1 != (op.form == ReductionOperator::Form::Tau1))
        throw SignatureMismatch("operator form does not match the determining system");
    return residual(sys, op.as_bindings(), with_singular(cfg, op.singular));
}

InvarianceReport check_conditional_invariance(const ParabolicEquation& eq, const ReductionOperator& op,
                                              const ProbeConfig& cfg) {
    eq.validate();
    JetSpace js({"t", "x"}, {"u"});
    const Expr u_t = js.jet("u", "t"), u_x = js.jet("u", "x"), u_xx = js.jet("u", "xx");
    const Expr Lu = add({u_t, -(eq.A * u_xx), -(eq.B * u_x), -(eq.C * U)});
    Expr R = prolong_apply(js, op.vector_field(), Lu);

    ProbeConfig c = with_singular(with_singular(cfg, eq.singular), op.singular);
    std::vector<JetRule> rules;
    // L[u] = 0 first, then Q[u] = 0, then its first differential consequences
    rules.push_back(JetRule{0, {1, 0}, add({eq.A * u_xx, eq.B * u_x, eq.C * U})});
    if (op.form == ReductionOperator::Form::Tau1) {
        if (vanishes(eq.A, c)) throw EliminationFailure("A vanishes; cannot solve Q[u] = 0 for u_xx");
        Expr eta = op.phi();
        Expr eta_u = diff(eta, "u");
        rules.push_back(JetRule{0, {0, 2}, (eta - (op.g1 + eq.B) * u_x - eq.C * U) / eq.A});
        rules.push_back(JetRule{0, {1, 1},
                                add({diff(eta, "x"), eta_u * u_x, -(diff(op.g1, "x") * u_x), -(op.g1 * u_xx)})});
        rules.push_back(JetRule{0, {2, 0},
                                add({diff(eta, "t"), eta_u * u_t, -(diff(op.g1, "t") * u_x),
                                     -(op.g1 * js.jet("u", "tx"))})});
    } else {
        Expr eta = op.eta;
        Expr eta_u = diff(eta, "u");
        rules.push_back(JetRule{0, {0, 1}, eta});
        rules.push_back(JetRule{0, {0, 2}, diff(eta, "x") + eta_u * u_x});
        rules.push_back(JetRule{0, {1, 1}, diff(eta, "t") + eta_u * u_t});
    }
    InvarianceReport rep;
    rep.reduced = reduce_by_rules(js, R, rules);
    rep.verdict = equals_zero(rep.reduced, c);
    return rep;
}

}  // namespace redop
