#include "redop/construct.hpp"

namespace redop {

namespace {

bool vanishes(const Expr& e, const ProbeConfig& cfg) { return equals_zero(e, cfg).is_zero(); }

void require_solution(const ParabolicEquation& eq, const Expr& v, const ProbeConfig& cfg, const char* what) {
    if (depends_on(v, "u")) throw SignatureMismatch(std::string(what) + " must be a function of (t,x)");
    if (!vanishes(apply_L(eq, v), cfg))
        throw ConstructionError(std::string(what) + " is not a solution: " + to_string(v));
}

// Laplace expansion along the first row; sizes here are at most 4.
Expr det(const std::vector<std::vector<Expr>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<Expr>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Expr> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        Expr t = m[0][j] * det(minor);
        terms.push_back(j % 2 ? -t : t);
    }
    return add(std::move(terms));
}

}  // namespace

Expr wronskian(const std::vector<Expr>& fs, const std::string& var) {
    if (fs.empty()) throw Error("wronskian of an empty list");
    const std::size_t n = fs.size();
    std::vector<std::vector<Expr>> m(n, std::vector<Expr>(n));
    for (std::size_t j = 0; j < n; ++j) {
        Expr d = fs[j];
        for (std::size_t i = 0; i < n; ++i) {
            m[i][j] = d;
            if (i + 1 < n) d = diff(d, var);
        }
    }
    return det(m);
}

void SolutionTuple::validate(const ProbeConfig& cfg) const {
    source.validate();
    ProbeConfig c = with_singular(cfg, source.singular);
    require_solution(source, v1, c, "v1");
    require_solution(source, v2, c, "v2");
    require_solution(source, v3, c, "v3");
    if (vanishes(wronskian({v1, v2}), c)) throw ConstructionError("v1 and v2 are linearly dependent");
}

ReductionOperator operator_from_solutions(const SolutionTuple& tup, const ProbeConfig& cfg) {
    tup.validate(cfg);
    const auto& eq = tup.source;
    const Expr W = wronskian({tup.v1, tup.v2});
    const Expr g1 = -(eq.A * diff(W, "x") / W) - eq.B;
    const Expr g2 = -(eq.A * wronskian({diff(tup.v1, "x"), diff(tup.v2, "x")}) / W) + eq.C;
    const Expr g3 = eq.A * wronskian({tup.v1, tup.v2, tup.v3}) / W;
    auto q = ReductionOperator::tau1(g1, g2, g3);
    q.singular.push_back(W);
    return q;
}

SolutionFamily family_from_operator_tau1(const ReductionOperator& q, const SolutionTuple& tup, const ProbeConfig& cfg) {
    if (q.form != ReductionOperator::Form::Tau1) throw SignatureMismatch("expected a Tau1 operator");
    auto ref = operator_from_solutions(tup, cfg);
    ProbeConfig c = with_singular(with_singular(cfg, tup.source.singular), ref.singular);
    if (!vanishes(q.g1 - ref.g1, c) || !vanishes(q.g2 - ref.g2, c) || !vanishes(q.g3 - ref.g3, c))
        throw ConstructionError("operator does not match the solution tuple");
    SolutionFamily fam;
    fam.u = sym("c1") * tup.v1 + sym("c2") * tup.v2 + tup.v3;
    fam.params = {"c1", "c2"};
    fam.source = tup.source;
    if (!vanishes(q.apply(fam.u), c)) throw ConstructionError("family is not invariant under the operator");
    return fam;
}

ReductionOperator eta_from_linear_family(const ParabolicEquation& eq, const Expr& psi1, const Expr& psi0,
                                         const ProbeConfig& cfg) {
    eq.validate();
    ProbeConfig c = with_singular(cfg, eq.singular);
    if (vanishes(psi1, c)) throw ConstructionError("Psi1 vanishes identically");
    require_solution(eq, psi1, c, "Psi1");
    require_solution(eq, psi0, c, "Psi0");
    const Expr eta1 = diff(psi1, "x") / psi1;
    const Expr eta0 = diff(psi0, "x") - eta1 * psi0;
    auto q = ReductionOperator::tau0(eta1 * sym("u") + eta0);
    q.singular.push_back(psi1);
    return q;
}

ReductionOperator eta_from_general_family(const SolutionFamily& fam, const Expr& phi, const ProbeConfig& cfg) {
    if (fam.params.size() != 1) throw ConstructionError("expected a one-parameter family");
    const std::string& k = fam.params[0];
    ProbeConfig c = with_singular(cfg, fam.source.singular);
    if (vanishes(diff(fam.u, k), c)) throw ConstructionError("family parameter is not essential");
    require_solution(fam.source, fam.u, c, "family");
    if (depends_on(phi, k)) throw ConstructionError("inversion must not contain the family parameter");
    if (!vanishes(substitute(phi, "u", fam.u) - sym(k), c))
        throw ConstructionError("inversion check failed: Phi(t, x, f) != " + k);
    const Expr phi_u = diff(phi, "u");
    if (vanishes(phi_u, c)) throw ConstructionError("Phi_u vanishes identically");
    auto q = ReductionOperator::tau0(-(diff(phi, "x") / phi_u));
    q.singular.push_back(phi_u);
    return q;
}

ReductionOperator cole_hopf_operator(const ParabolicEquation& eq, const Expr& v, const ProbeConfig& cfg) {
    eq.validate();
    ProbeConfig c = with_singular(cfg, eq.singular);
    if (!vanishes(eq.C, c)) throw ConstructionError("Cole-Hopf operator needs C = 0");
    require_solution(eq, v, c, "v");
    const Expr vx = diff(v, "x");
    if (vanishes(vx, c)) throw ConstructionError("v must depend on x");
    auto q = ReductionOperator::tau1(-(eq.A * diff(vx, "x") / vx + eq.B), 0, 0);
    q.singular.push_back(vx);
    return q;
}

Expr DarbouxOperator::wronskian() const { return redop::wronskian(seeds); }

DarbouxOperator make_darboux(const ParabolicEquation& eq, std::vector<Expr> seeds, const ProbeConfig& cfg) {
    if (seeds.empty()) throw ConstructionError("Darboux operator needs at least one seed");
    eq.validate();
    ProbeConfig c = with_singular(cfg, eq.singular);
    for (const auto& s : seeds) require_solution(eq, s, c, "seed");
    DarbouxOperator d{std::move(seeds)};
    if (vanishes(d.wronskian(), c)) throw ConstructionError("Darboux seeds are linearly dependent");
    return d;
}

Expr darboux_apply(const DarbouxOperator& dop, const Expr& u) {
    std::vector<Expr> fs = dop.seeds;
    fs.push_back(u);
    return redop::wronskian(fs) / dop.wronskian();
}

ParabolicEquation darboux_transformed_equation(const ParabolicEquation& eq, const DarbouxOperator& dop) {
    const Expr p = num(static_cast<long long>(dop.order()), 1);
    const Expr W = dop.wronskian();
    const Expr r = diff(W, "x") / W;
    ParabolicEquation out;
    out.A = eq.A;
    out.B = eq.B + p * diff(eq.A, "x");
    out.C = add({eq.C, p * diff(eq.B, "x"), p * (p + 1) / 2 * diff(eq.A, "x", 2), r * diff(eq.A, "x"),
                 2 * diff(r, "x") * eq.A});
    out.singular = eq.singular;
    out.singular.push_back(W);
    return out;
}

}  // namespace redop
