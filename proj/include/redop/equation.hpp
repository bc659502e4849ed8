#pragma once

#include <string>
#include <vector>

#include "redop/expr.hpp"

namespace redop {

/// u_t = A u_xx + B u_x + C u with coefficients in (t, x).
struct ParabolicEquation {
    Expr A = 1;
    Expr B = 0;
    Expr C = 0;
    /// Loci the coefficients are singular on; used to steer probing.
    std::vector<Expr> singular;

    /// Throws SignatureMismatch if a coefficient depends on u or A vanishes.
    void validate() const;
    std::string to_string() const;

    static ParabolicEquation heat();
};

/// u_t = u_xx - V u.
struct ReducedEquation {
    Expr V = 0;
    ParabolicEquation as_parabolic() const;
    std::string to_string() const;
};

/// L[u] = u_t - A u_xx - B u_x - C u for an explicit expression u.
Expr apply_L(const ParabolicEquation& eq, const Expr& u);

/// Cases of Lie symmetry extension for the reduced form.
enum class LieCaseKind { Kernel, Stationary, InverseSquare, Free };

struct LieCase {
    LieCaseKind kind = LieCaseKind::Kernel;
    Expr mu;  // InverseSquare only: V = mu x^-2
    std::string label() const;
};

}  // namespace redop
