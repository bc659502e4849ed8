#pragma once

#include <string>
#include <vector>

#include "redop/equation.hpp"
#include "redop/jet.hpp"
#include "redop/numeric.hpp"

namespace redop {

/// Unknowns of the determining systems: g1, g2, g3 of (t,x) and eta of (t,x,u).
const FunctionRef& g_function(int i);
const FunctionRef& eta_function();

/**
 * Reduction operator in one of the two canonical forms
 *   Tau1:  d_t + g1 d_x + (g2 u + g3) d_u,   g1, g2, g3 functions of (t,x)
 *   Tau0:  d_x + eta d_u,                    eta a function of (t,x,u)
 */
struct ReductionOperator {
    enum class Form { Tau1, Tau0 };
    Form form = Form::Tau1;
    Expr g1, g2, g3;
    Expr eta;
    std::vector<Expr> singular;

    static ReductionOperator tau1(Expr g1, Expr g2, Expr g3);
    static ReductionOperator tau0(Expr eta);
    /// Normalizes tau d_t + xi d_x + eta d_u: divides by tau when tau does
    /// not vanish identically, otherwise by xi. Rejects tau = xi = 0.
    static ReductionOperator from_general(const Expr& tau, const Expr& xi, const Expr& eta,
                                          const ProbeConfig& cfg = {});

    Expr tau() const;
    Expr xi() const;
    /// Coefficient of d_u.
    Expr phi() const;
    VectorField vector_field() const;
    /// Q[u] in the jet coordinates u, u_t, u_x.
    Expr characteristic() const;
    /// Q[u] for an explicit u(t,x).
    Expr apply(const Expr& u) const;
    /// Candidate for the matching determining system.
    Bindings as_bindings() const;
    std::string to_string() const;
};

enum class SystemKind { DE1, DE0 };

/// Determining equations written as expressions equal to zero, with the
/// unknowns as arbitrary functions g1, g2, g3 or eta.
struct DeterminingSystem {
    SystemKind kind = SystemKind::DE1;
    std::vector<Expr> equations;
    ParabolicEquation source;

    JetSpace jet_space() const;
    /// Equations with unknowns replaced by jet symbols.
    std::vector<Expr> in_jets() const;
    /// Each equation solved for the t-derivative of its unknown.
    std::vector<JetRule> evolution_rules() const;
    std::string to_string() const;
};

DeterminingSystem derive_DE1(const ParabolicEquation& eq);
DeterminingSystem derive_DE0(const ParabolicEquation& eq);

struct ResidualReport {
    std::vector<Expr> residuals;
    std::vector<ZeroVerdict> verdicts;
    ZeroVerdict overall;
};

ResidualReport residual(const DeterminingSystem& sys, const Bindings& candidate, const ProbeConfig& cfg = {});
ResidualReport residual(const DeterminingSystem& sys, const ReductionOperator& op, const ProbeConfig& cfg = {});

struct InvarianceReport {
    Expr reduced;  // prolonged Q applied to L[u], restricted to the manifold
    ZeroVerdict verdict;
};

/// Direct conditional-invariance check by jet-space prolongation, used as an
/// independent oracle for the determining systems.
InvarianceReport check_conditional_invariance(const ParabolicEquation& eq, const ReductionOperator& op,
                                              const ProbeConfig& cfg = {});

/// Probe configuration extended with extra nonvanishing constraints.
ProbeConfig with_singular(ProbeConfig cfg, const std::vector<Expr>& extra);

}  // namespace redop
