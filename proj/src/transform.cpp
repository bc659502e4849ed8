#include "redop/transform.hpp"

#include <sstream>

#include "redop/integrate.hpp"

namespace redop {

namespace {

const Expr T_ = sym("t");
const Expr X_ = sym("x");
const Expr U_ = sym("u");

bool vanishes(const Expr& e, const ProbeConfig& cfg) { return equals_zero(e, cfg).is_zero(); }

void require_free_of(const Expr& e, const std::string& v, const std::string& what) {
    if (depends_on(e, v)) throw SignatureMismatch(what + " must not depend on " + v);
}

}  // namespace

// ---- PointTransformation ---------------------------------------------------

PointTransformation PointTransformation::identity() {
    PointTransformation p;
    p.Tinv = T_;
    p.Xinv = X_;
    return p;
}

void PointTransformation::validate(const ProbeConfig& cfg) const {
    require_free_of(T, "x", "T");
    require_free_of(T, "u", "T");
    require_free_of(X, "u", "X");
    require_free_of(U1, "u", "U1");
    require_free_of(U0, "u", "U0");
    if (vanishes(diff(T, "t") * diff(X, "x") * U1, cfg))
        throw NonInvertible("T_t X_x U1 vanishes identically");
}

PointTransformation PointTransformation::with_inverse(const ProbeConfig& cfg) const {
    validate(cfg);
    PointTransformation p = *this;
    if (!p.Tinv) {
        auto lin = as_linear(T, "t");
        if (!lin || contains_functions(lin->first) || contains_functions(lin->second))
            throw NonInvertible("T is not affine in t with constant coefficients; supply Tinv");
        p.Tinv = (T_ - lin->second) / lin->first;
    }
    if (!p.Xinv) {
        auto lin = as_linear(X, "x");
        if (!lin) throw NonInvertible("X is not affine in x; supply Xinv");
        Expr a = substitute(lin->first, "t", *p.Tinv);
        Expr b = substitute(lin->second, "t", *p.Tinv);
        p.Xinv = (X_ - b) / a;
    }
    // round trip: T(Tinv(t)) = t and X(Tinv, Xinv) = x
    Bindings b = p.inverse_bindings();
    if (!vanishes(substitute(T, b) - T_, cfg)) throw NonInvertible("Tinv does not invert T");
    if (!vanishes(substitute(X, b) - X_, cfg)) throw NonInvertible("Xinv does not invert X");
    return p;
}

Bindings PointTransformation::inverse_bindings() const {
    if (!Tinv || !Xinv) throw NonInvertible("inverse of the transformation is not available");
    Bindings b;
    b.bind("t", *Tinv);
    b.bind("x", *Xinv);
    return b;
}

Expr PointTransformation::to_new(const Expr& e, bool with_u) const {
    Expr r = e;
    if (with_u) r = substitute(r, "u", (U_ - U0) / U1);
    return substitute(r, inverse_bindings());
}

std::string PointTransformation::to_string() const {
    std::ostringstream os;
    os << "T = " << T << "\nX = " << X << "\nU1 = " << U1 << "\nU0 = " << U0;
    if (Tinv) os << "\nTinv = " << *Tinv;
    if (Xinv) os << "\nXinv = " << *Xinv;
    return os.str();
}

PointTransformation compose(const PointTransformation& second, const PointTransformation& first) {
    Bindings inner;
    inner.bind("t", first.T);
    inner.bind("x", first.X);
    PointTransformation p;
    p.T = substitute(second.T, inner);
    p.X = substitute(second.X, inner);
    Expr u1 = substitute(second.U1, inner);
    p.U1 = u1 * first.U1;
    p.U0 = u1 * first.U0 + substitute(second.U0, inner);
    if (first.Tinv && first.Xinv && second.Tinv && second.Xinv) {
        Bindings outer;
        outer.bind("t", *second.Tinv);
        outer.bind("x", *second.Xinv);
        p.Tinv = substitute(*first.Tinv, outer);
        p.Xinv = substitute(*first.Xinv, outer);
    }
    return p;
}

// ---- equations ----------------------------------------------------------------

ParabolicEquation push_equation_raw(const ParabolicEquation& eq, const PointTransformation& tr) {
    const Expr Tt = diff(tr.T, "t");
    const Expr Xx = diff(tr.X, "x");
    ParabolicEquation r;
    r.A = Xx * Xx * eq.A / Tt;
    r.B = (Xx / Tt) * (eq.B - 2 * diff(tr.U1, "x") / tr.U1 * eq.A) -
          (diff(tr.X, "t") - eq.A * diff(tr.X, "x", 2)) / Tt;
    r.C = -(tr.U1 / Tt) * apply_L(eq, 1 / tr.U1);
    r.singular = eq.singular;
    return r;
}

ParabolicEquation push_equation(const ParabolicEquation& eq, const PointTransformation& tr, const ProbeConfig& cfg,
                                bool check_admissible) {
    eq.validate();
    ProbeConfig c = with_singular(cfg, eq.singular);
    PointTransformation p = tr.with_inverse(c);
    if (check_admissible && !tr.U0.is_zero() && !vanishes(apply_L(eq, tr.U0 / tr.U1), c))
        throw ConstructionError("U0/U1 is not a solution of the source equation");
    ParabolicEquation raw = push_equation_raw(eq, p);
    ParabolicEquation r;
    r.A = p.to_new(raw.A);
    r.B = p.to_new(raw.B);
    r.C = p.to_new(raw.C);
    for (const auto& s : eq.singular) r.singular.push_back(p.to_new(s));
    return r;
}

// ---- operators ----------------------------------------------------------------

ReductionOperator push_operator_raw(const ReductionOperator& q, const PointTransformation& tr) {
    const Expr& U1 = tr.U1;
    const Expr& U0 = tr.U0;
    if (q.form == ReductionOperator::Form::Tau1) {
        const Expr Tt = diff(tr.T, "t");
        const Expr g1 = (diff(tr.X, "x") / Tt) * q.g1 + diff(tr.X, "t") / Tt;
        const Expr g2 = q.g2 / Tt + diff(U1, "x") / (Tt * U1) * q.g1 + diff(U1, "t") / (Tt * U1);
        const Expr g3 = add({(U1 / Tt) * q.g3, -(U0 / Tt) * q.g2,
                             (diff(U0, "x") * U1 - U0 * diff(U1, "x")) / (Tt * U1) * q.g1,
                             (diff(U0, "t") * U1 - U0 * diff(U1, "t")) / (Tt * U1)});
        auto r = ReductionOperator::tau1(g1, g2, g3);
        r.singular = q.singular;
        return r;
    }
    const Expr Xx = diff(tr.X, "x");
    // eta~ in the old variables; u is then re-expressed through u~
    Expr eta = (U1 * q.eta + diff(U1, "x") * U_ + diff(U0, "x")) / Xx;
    auto r = ReductionOperator::tau0(eta);
    r.singular = q.singular;
    return r;
}

ReductionOperator push_operator_tau1(const ReductionOperator& q, const PointTransformation& tr,
                                     const ProbeConfig& cfg) {
    if (q.form != ReductionOperator::Form::Tau1) throw SignatureMismatch("expected a Tau1 operator");
    PointTransformation p = tr.with_inverse(cfg);
    ReductionOperator raw = push_operator_raw(q, p);
    auto r = ReductionOperator::tau1(p.to_new(raw.g1), p.to_new(raw.g2), p.to_new(raw.g3));
    for (const auto& s : q.singular) r.singular.push_back(p.to_new(s));
    return r;
}

ReductionOperator push_operator_tau0(const ReductionOperator& q, const PointTransformation& tr,
                                     const ProbeConfig& cfg) {
    if (q.form != ReductionOperator::Form::Tau0) throw SignatureMismatch("expected a Tau0 operator");
    PointTransformation p = tr.with_inverse(cfg);
    ReductionOperator raw = push_operator_raw(q, p);
    auto r = ReductionOperator::tau0(p.to_new(raw.eta, true));
    for (const auto& s : q.singular) r.singular.push_back(p.to_new(s, true));
    return r;
}

ReductionOperator push_operator(const ReductionOperator& q, const PointTransformation& tr, const ProbeConfig& cfg) {
    return q.form == ReductionOperator::Form::Tau1 ? push_operator_tau1(q, tr, cfg) : push_operator_tau0(q, tr, cfg);
}

// ---- infinitesimal operators ------------------------------------------------------

void InfinitesimalOperator::validate() const {
    require_free_of(tau, "x", "tau");
    for (const auto* c : {&tau, &xi, &zeta1, &zeta0}) require_free_of(*c, "u", "operator coefficient");
}

VectorField InfinitesimalOperator::vector_field() const { return VectorField{{tau, xi}, {zeta1 * U_ + zeta0}}; }

std::string InfinitesimalOperator::to_string() const {
    std::ostringstream os;
    os << (name.empty() ? "Q" : name) << ": tau = " << tau << ", xi = " << xi << ", zeta1 = " << zeta1
       << ", zeta0 = " << zeta0;
    return os.str();
}

std::string InducedOperator::to_string() const {
    std::ostringstream os;
    const char* vars1[] = {"t", "x"};
    const char* vars0[] = {"t", "x", "u"};
    const char* unk1[] = {"g1", "g2", "g3"};
    os << (name.empty() ? "Q" : name) << ":";
    for (std::size_t i = 0; i < xi.size(); ++i)
        os << " [d" << (system == SystemKind::DE1 ? vars1[i] : vars0[i]) << "] " << xi[i] << ";";
    for (std::size_t a = 0; a < theta.size(); ++a)
        os << " [d" << (system == SystemKind::DE1 ? unk1[a] : "eta") << "] " << theta[a] << ";";
    return os.str();
}

InducedOperator induce_on_DE1(const InfinitesimalOperator& q) {
    q.validate();
    const Expr g1 = sym("g1"), g2 = sym("g2"), g3 = sym("g3");
    const Expr tau_t = diff(q.tau, "t");
    InducedOperator r;
    r.system = SystemKind::DE1;
    r.name = q.name.empty() ? "" : q.name + "1";
    r.xi = {q.tau, q.xi};
    r.theta = {(diff(q.xi, "x") - tau_t) * g1 + diff(q.xi, "t"),
               -(tau_t * g2) + diff(q.zeta1, "x") * g1 + diff(q.zeta1, "t"),
               add({(q.zeta1 - tau_t) * g3, -(q.zeta0 * g2), diff(q.zeta0, "x") * g1, diff(q.zeta0, "t")})};
    return r;
}

InducedOperator induce_on_DE0(const InfinitesimalOperator& q) {
    q.validate();
    const Expr eta = sym("eta");
    InducedOperator r;
    r.system = SystemKind::DE0;
    r.name = q.name.empty() ? "" : q.name + "0";
    r.xi = {q.tau, q.xi, q.zeta1 * U_ + q.zeta0};
    r.theta = {(q.zeta1 - diff(q.xi, "x")) * eta + diff(q.zeta1, "x") * U_ + diff(q.zeta0, "x")};
    return r;
}

ZeroVerdict check_system_symmetry(const DeterminingSystem& sys, const InducedOperator& q, const ProbeConfig& cfg) {
    if (q.system != sys.kind) throw SignatureMismatch("induced operator does not act on this system");
    JetSpace js = sys.jet_space();
    auto rules = sys.evolution_rules();
    ProbeConfig c = with_singular(cfg, sys.source.singular);
    std::vector<ZeroVerdict> vs;
    for (const auto& E : sys.in_jets()) {
        Expr R = prolong_apply(js, q.vector_field(), E);
        vs.push_back(equals_zero(reduce_by_rules(js, R, rules), c));
    }
    return combine(vs);
}

ZeroVerdict check_lie_symmetry(const ParabolicEquation& eq, const InfinitesimalOperator& q, const ProbeConfig& cfg) {
    eq.validate();
    q.validate();
    JetSpace js({"t", "x"}, {"u"});
    const Expr u_t = js.jet("u", "t"), u_x = js.jet("u", "x"), u_xx = js.jet("u", "xx");
    Expr Lu = add({u_t, -(eq.A * u_xx), -(eq.B * u_x), -(eq.C * U_)});
    Expr R = prolong_apply(js, q.vector_field(), Lu);
    std::vector<JetRule> rules{JetRule{0, {1, 0}, add({eq.A * u_xx, eq.B * u_x, eq.C * U_}), true}};
    R = reduce_by_rules(js, R, rules);
    return equals_zero(R, with_singular(cfg, eq.singular));
}

// ---- catalog ------------------------------------------------------------------

InfinitesimalOperator op_dt() { return {"dt", 1, 0, 0, 0}; }
InfinitesimalOperator op_dx() { return {"dx", 0, 1, 0, 0}; }
InfinitesimalOperator op_galilei() { return {"G", 0, 2 * T_, -X_, 0}; }
InfinitesimalOperator op_dilation() { return {"D", 2 * T_, X_, 0, 0}; }
InfinitesimalOperator op_projective() {
    return {"Pi", 4 * T_ * T_, 4 * T_ * X_, -(X_ * X_ + 2 * T_), 0};
}
InfinitesimalOperator op_scaling_u() { return {"I", 0, 0, 1, 0}; }

std::vector<InfinitesimalOperator> lie_catalog(const LieCase& c) {
    switch (c.kind) {
    case LieCaseKind::Free:
        return {op_dt(), op_dx(), op_galilei(), op_dilation(), op_projective(), op_scaling_u()};
    case LieCaseKind::InverseSquare: return {op_dt(), op_dilation(), op_projective(), op_scaling_u()};
    case LieCaseKind::Stationary: return {op_dt(), op_scaling_u()};
    case LieCaseKind::Kernel: return {op_scaling_u()};
    }
    return {};
}

InfinitesimalOperator trivial_symmetry(const ParabolicEquation& eq, const Expr& f, const ProbeConfig& cfg) {
    if (depends_on(f, "u")) throw SignatureMismatch("f must be a function of (t,x)");
    if (!vanishes(apply_L(eq, f), with_singular(cfg, eq.singular)))
        throw ConstructionError("f is not a solution of the equation");
    return {"f*du", 0, 0, 0, f};
}

}  // namespace redop
