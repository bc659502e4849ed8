#pragma once

#include <string>
#include <vector>

#include "redop/detsys.hpp"
#include "redop/equation.hpp"

namespace redop {

/// det(d^(i-1) f_j / dv^(i-1)).
Expr wronskian(const std::vector<Expr>& fs, const std::string& var = "x");

/// Solutions v1, v2, v3 of one equation; v3 may be 0.
struct SolutionTuple {
    Expr v1, v2, v3 = 0;
    ParabolicEquation source;

    /// Each v solves the source and W(v1, v2) does not vanish identically.
    void validate(const ProbeConfig& cfg = {}) const;
};

/// u = f(t, x, params...) solving the source equation.
struct SolutionFamily {
    Expr u;
    std::vector<std::string> params;
    ParabolicEquation source;
};

/// Tau1 operator whose invariant family is c1 v1 + c2 v2 + v3.
ReductionOperator operator_from_solutions(const SolutionTuple& tup, const ProbeConfig& cfg = {});

/// Checks Q against the tuple and returns u = c1 v1 + c2 v2 + v3.
SolutionFamily family_from_operator_tau1(const ReductionOperator& q, const SolutionTuple& tup,
                                         const ProbeConfig& cfg = {});

/// eta = eta1 u + eta0 with eta1 = Psi1_x / Psi1 and eta0 = Psi0_x - eta1 Psi0.
ReductionOperator eta_from_linear_family(const ParabolicEquation& eq, const Expr& psi1, const Expr& psi0,
                                         const ProbeConfig& cfg = {});

/// eta = -Phi_x / Phi_u for a one-parameter family inverted as kappa = Phi(t,x,u).
ReductionOperator eta_from_general_family(const SolutionFamily& fam, const Expr& phi, const ProbeConfig& cfg = {});

/// d_t - (A v_xx / v_x + B) d_x for an equation with C = 0.
ReductionOperator cole_hopf_operator(const ParabolicEquation& eq, const Expr& v, const ProbeConfig& cfg = {});

/// u -> W(psi1..psip, u) / W(psi1..psip).
struct DarbouxOperator {
    std::vector<Expr> seeds;

    std::size_t order() const { return seeds.size(); }
    Expr wronskian() const;
};

/// Builds a Darboux operator after checking the seeds solve eq and are independent.
DarbouxOperator make_darboux(const ParabolicEquation& eq, std::vector<Expr> seeds, const ProbeConfig& cfg = {});

Expr darboux_apply(const DarbouxOperator& dop, const Expr& u);

ParabolicEquation darboux_transformed_equation(const ParabolicEquation& eq, const DarbouxOperator& dop);

}  // namespace redop
