#include "redop/transfer.hpp"

#include "redop/integrate.hpp"

namespace redop {

namespace {

const Expr T_ = sym("t");
const Expr X_ = sym("x");
const Expr U_ = sym("u");

Expr prefactor(const TransferEquation& te, int k) {
    return 2 * num(k + 1, 1) * (te.h + num(2 * k + 1, 1));
}

}  // namespace

TransferEquation transfer_equation(const Expr& h) {
    if (depends_on(h, "x") || depends_on(h, "u")) throw SignatureMismatch("h must depend on t only");
    TransferEquation te;
    te.h = h;
    te.eq.A = 1;
    te.eq.B = h / X_;
    te.eq.C = 0;
    te.eq.singular = {X_};
    te.H = integrate_or_declare(h + 1, "t", "H");
    return te;
}

std::vector<ReductionOperator> canonical_operators(const TransferEquation& te, const Expr& kappa, const Expr& nu) {
    auto q = ReductionOperator::tau1(-(te.h + 1) / X_, 0, 0);
    q.singular = {X_};
    auto g = ReductionOperator::from_general(0, 2 * T_ + kappa, -(X_ * U_));
    // eta = x*zeta with constant zeta; a bare constant eta fails DE0 once h != 0
    auto s = ReductionOperator::tau0(nu * X_);
    return {q, g, s};
}

Expr gaussian_quadrature(const TransferEquation& te, const Expr& kappa) {
    return integrate_or_declare((te.h + 1) / (2 * T_ + kappa), "t", "R");
}

SolutionFamily invariant_solution_Gk(const TransferEquation& te, const Expr& kappa, const Expr& c1) {
    Expr R = gaussian_quadrature(te, kappa);
    SolutionFamily f;
    f.u = c1 * exp(-(X_ * X_) / (2 * (2 * T_ + kappa)) - R);
    if (c1.is(Kind::Sym)) f.params = {c1.name()};
    f.source = te.eq;
    f.source.singular.push_back(2 * T_ + kappa);
    return f;
}

SolutionFamily quadratic_family(const TransferEquation& te) {
    SolutionFamily f;
    f.u = sym("c2") * (X_ * X_ + 2 * te.H) + sym("c1");
    f.params = {"c1", "c2"};
    f.source = te.eq;
    return f;
}

SeriesSolution polynomial_series(const TransferEquation& te, int N, const std::string& prefix) {
    if (N < 0) throw Error("series order must be non-negative");
    SeriesSolution s;
    s.kind = SeriesSolution::Kind::Polynomial;
    s.N = N;
    s.coefficients.assign(N + 1, Expr(0));
    for (int k = 0; k <= N; ++k) s.constants.push_back(prefix + std::to_string(k));
    s.coefficients[N] = sym(s.constants[N]);
    for (int k = N - 1; k >= 0; --k) {
        Expr integrand = prefactor(te, k) * s.coefficients[k + 1];
        s.coefficients[k] = integrate_or_declare(integrand, "t", "T" + std::to_string(k)) + sym(s.constants[k]);
    }
    std::vector<Expr> terms;
    for (int k = 0; k <= N; ++k) terms.push_back(s.coefficients[k] * pow(X_, Rational(2 * k)));
    s.u = add(std::move(terms));
    return s;
}

SeriesSolution gaussian_series(const TransferEquation& te, int N, const Expr& kappa, const std::string& prefix) {
    if (N < 0) throw Error("series order must be non-negative");
    const Expr w = 2 * T_ + kappa;
    SeriesSolution s;
    s.kind = SeriesSolution::Kind::Gaussian;
    s.N = N;
    s.kappa = kappa;
    s.R = gaussian_quadrature(te, kappa);
    s.coefficients.assign(N + 1, Expr(0));
    for (int k = 0; k <= N; ++k) s.constants.push_back(prefix + std::to_string(k));
    s.coefficients[N] = sym(s.constants[N]);
    for (int k = N - 1; k >= 0; --k) {
        Expr integrand = prefactor(te, k) * pow(w, Rational(-2)) * s.coefficients[k + 1];
        s.coefficients[k] = integrate_or_declare(integrand, "t", "S" + std::to_string(k)) + sym(s.constants[k]);
    }
    std::vector<Expr> terms;
    for (int k = 0; k <= N; ++k) terms.push_back(s.coefficients[k] * pow(X_ / w, Rational(2 * k)));
    s.u = add(std::move(terms)) * exp(-(X_ * X_) / (2 * w) - s.R);
    return s;
}

std::vector<Expr> series_recurrence_residuals(const TransferEquation& te, const SeriesSolution& s) {
    std::vector<Expr> out;
    for (int k = 0; k <= s.N; ++k) {
        Expr lhs = diff(s.coefficients[k], "t");
        if (k < s.N) {
            Expr rhs = prefactor(te, k) * s.coefficients[k + 1];
            if (s.kind == SeriesSolution::Kind::Gaussian) rhs = rhs * pow(2 * T_ + s.kappa, Rational(-2));
            lhs = lhs - rhs;
        }
        out.push_back(lhs);
    }
    return out;
}

}  // namespace redop
