#include "redop/pde.hpp"

#include "redop/integrate.hpp"

namespace redop {

namespace {

bool vanishes(const Expr& e, const ProbeConfig& cfg) { return equals_zero(e, cfg).is_zero(); }

}  // namespace

GaugeResult gauge_to_reduced(const ParabolicEquation& eq, const GaugeHints& hints, const ProbeConfig& cfg) {
    eq.validate();
    ProbeConfig c = with_singular(cfg, eq.singular);
    const Expr& A = eq.A;

    Expr X;
    Expr rootA = pow(A, Rational(-1, 2));
    if (hints.X) {
        X = *hints.X;
        if (!vanishes(diff(X, "x") - rootA, c)) throw NonQuadrable("supplied X does not satisfy X_x = A^(-1/2)");
    } else {
        auto q = integrate(rootA, "x");
        if (!q) throw NonQuadrable("no closed form for the integral of A^(-1/2) in x: " + to_string(rootA));
        X = *q;
    }

    const Expr Xx = diff(X, "x");
    const Expr dlog = (Xx * eq.B - diff(X, "t") + A * diff(X, "x", 2)) / (2 * A * Xx);
    Expr logU1;
    if (hints.logU1) {
        logU1 = *hints.logU1;
        if (!vanishes(diff(logU1, "x") - dlog, c)) throw NonQuadrable("supplied log U1 has the wrong x-derivative");
    } else {
        auto q = integrate(dlog, "x");
        if (!q) throw NonQuadrable("no closed form for the gauge integral: " + to_string(dlog));
        logU1 = *q;
    }

    PointTransformation tr;
    tr.T = sym("t");
    tr.X = X;
    tr.U1 = exp(logU1);
    tr.U0 = 0;
    tr.Tinv = sym("t");
    if (hints.Xinv) tr.Xinv = *hints.Xinv;
    tr = tr.with_inverse(c);

    ParabolicEquation pushed = push_equation(eq, tr, cfg, false);
    GaugeResult r;
    r.reduced.V = -pushed.C;
    r.transform = tr;
    return r;
}

LieCase classify_lie(const ReducedEquation& red, const ProbeConfig& cfg) {
    const Expr& V = red.V;
    LieCase c;
    if (vanishes(V, cfg)) {
        c.kind = LieCaseKind::Free;
        return c;
    }
    Expr mu = V * sym("x") * sym("x");
    bool constant = !depends_on(mu, "t") && !depends_on(mu, "x") && !depends_on(mu, "u") && !contains_functions(mu);
    if (constant) {
        c.kind = LieCaseKind::InverseSquare;
        c.mu = mu;
        return c;
    }
    c.kind = vanishes(diff(V, "t"), cfg) ? LieCaseKind::Stationary : LieCaseKind::Kernel;
    return c;
}

}  // namespace redop
