#include "redop/equation.hpp"

#include "redop/numeric.hpp"

namespace redop {

void ParabolicEquation::validate() const {
    for (const auto* c : {&A, &B, &C})
        if (depends_on(*c, "u")) throw SignatureMismatch("equation coefficients must not depend on u");
    if (A.is_zero()) throw SignatureMismatch("the diffusion coefficient A must not vanish");
}

std::string ParabolicEquation::to_string() const {
    return "A = " + redop::to_string(A) + "\nB = " + redop::to_string(B) + "\nC = " + redop::to_string(C);
}

ParabolicEquation ParabolicEquation::heat() { return ParabolicEquation{}; }

ParabolicEquation ReducedEquation::as_parabolic() const {
    ParabolicEquation eq;
    eq.C = -V;
    return eq;
}

std::string ReducedEquation::to_string() const { return "V = " + redop::to_string(V); }

Expr apply_L(const ParabolicEquation& eq, const Expr& u) {
    return add({diff(u, "t"), -(eq.A * diff(u, "x", 2)), -(eq.B * diff(u, "x")), -(eq.C * u)});
}

std::string LieCase::label() const {
    switch (kind) {
    case LieCaseKind::Kernel: return "kernel";
    case LieCaseKind::Stationary: return "stationary";
    case LieCaseKind::InverseSquare: return "inverse-square(mu = " + redop::to_string(mu) + ")";
    case LieCaseKind::Free: return "free";
    }
    return "?";
}

}  // namespace redop
