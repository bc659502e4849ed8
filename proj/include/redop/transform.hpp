#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redop/detsys.hpp"
#include "redop/equation.hpp"

namespace redop {

/**
 * Point transformation  t~ = T(t),  x~ = X(t,x),  u~ = U1(t,x) u + U0(t,x).
 * Tinv and Xinv express the old coordinates through the new ones, written
 * with the symbols t and x standing for t~ and x~.
 */
struct PointTransformation {
    Expr T = sym("t");
    Expr X = sym("x");
    Expr U1 = 1;
    Expr U0 = 0;
    std::optional<Expr> Tinv;
    std::optional<Expr> Xinv;

    static PointTransformation identity();

    /// Throws SignatureMismatch on wrong dependencies and NonInvertible if
    /// T_t X_x U1 vanishes identically.
    void validate(const ProbeConfig& cfg = {}) const;
    /// Fills in missing inverses for maps affine in t and in x, and checks
    /// supplied ones by round trip. Throws NonInvertible otherwise.
    PointTransformation with_inverse(const ProbeConfig& cfg = {}) const;
    /// Old-coordinate bindings t -> Tinv, x -> Xinv.
    Bindings inverse_bindings() const;
    /// Rewrites an expression in old coordinates (t, x, u) into new ones.
    Expr to_new(const Expr& e, bool with_u = false) const;
    std::string to_string() const;
};

/// second o first.
PointTransformation compose(const PointTransformation& second, const PointTransformation& first);

/// Coefficients of the image equation, still written in the old coordinates.
ParabolicEquation push_equation_raw(const ParabolicEquation& eq, const PointTransformation& tr);
/// Image equation in the new coordinates. When `check_admissible`, U0/U1
/// must solve eq.
ParabolicEquation push_equation(const ParabolicEquation& eq, const PointTransformation& tr,
                                const ProbeConfig& cfg = {}, bool check_admissible = true);

ReductionOperator push_operator_raw(const ReductionOperator& q, const PointTransformation& tr);
ReductionOperator push_operator_tau1(const ReductionOperator& q, const PointTransformation& tr,
                                     const ProbeConfig& cfg = {});
ReductionOperator push_operator_tau0(const ReductionOperator& q, const PointTransformation& tr,
                                     const ProbeConfig& cfg = {});
ReductionOperator push_operator(const ReductionOperator& q, const PointTransformation& tr,
                                const ProbeConfig& cfg = {});

/// Q = tau d_t + xi d_x + (zeta1 u + zeta0) d_u.
struct InfinitesimalOperator {
    std::string name;
    Expr tau = 0;
    Expr xi = 0;
    Expr zeta1 = 0;
    Expr zeta0 = 0;

    void validate() const;
    VectorField vector_field() const;  // on (t,x; u)
    std::string to_string() const;
};

/// Operator on the space of a determining system: independents plus the
/// unknowns (as jet symbols g1, g2, g3 or eta).
struct InducedOperator {
    SystemKind system = SystemKind::DE1;
    std::string name;
    std::vector<Expr> xi;     // per independent of the system's jet space
    std::vector<Expr> theta;  // per unknown
    VectorField vector_field() const { return VectorField{xi, theta}; }
    std::string to_string() const;
};

InducedOperator induce_on_DE1(const InfinitesimalOperator& q);
InducedOperator induce_on_DE0(const InfinitesimalOperator& q);

/// Infinitesimal invariance of a determining system, restricted to the
/// system and its differential consequences.
ZeroVerdict check_system_symmetry(const DeterminingSystem& sys, const InducedOperator& q,
                                  const ProbeConfig& cfg = {});

/// Classical Lie criterion restricted to L[u] = 0 only.
ZeroVerdict check_lie_symmetry(const ParabolicEquation& eq, const InfinitesimalOperator& q,
                               const ProbeConfig& cfg = {});

/// Named operators of the reduced-form cases.
InfinitesimalOperator op_dt();
InfinitesimalOperator op_dx();
InfinitesimalOperator op_galilei();
InfinitesimalOperator op_dilation();
InfinitesimalOperator op_projective();
InfinitesimalOperator op_scaling_u();

std::vector<InfinitesimalOperator> lie_catalog(const LieCase& c);

/// f d_u for a solution f of eq; throws ConstructionError otherwise.
InfinitesimalOperator trivial_symmetry(const ParabolicEquation& eq, const Expr& f, const ProbeConfig& cfg = {});

}  // namespace redop
