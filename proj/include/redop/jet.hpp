#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "redop/expr.hpp"

namespace redop {

/**
 * Jet coordinates for dependent variables over a list of independent ones.
 * Jet symbols are named dep_<letters>, letters sorted by independent index,
 * e.g. u_tx or eta_xu; the order-zero jet is the dependent name itself.
 */
class JetSpace {
public:
    JetSpace(std::vector<std::string> independents, std::vector<std::string> dependents);

    const std::vector<std::string>& independents() const { return indep_; }
    const std::vector<std::string>& dependents() const { return dep_; }

    std::string jet_name(std::size_t dep, const std::vector<int>& alpha) const;
    Expr jet(std::size_t dep, const std::vector<int>& alpha) const;
    /// Jet symbol by suffix letters, e.g. jet("u", "tx").
    Expr jet(const std::string& dep, const std::string& letters) const;
    std::optional<std::pair<std::size_t, std::vector<int>>> parse_jet(const std::string& name) const;

    Expr total_derivative(const Expr& e, std::size_t indep) const;
    Expr total_derivative(const Expr& e, const std::vector<int>& alpha) const;

    /// Replaces applications dep(indeps) and their derivatives by jet symbols.
    Expr to_jets(const Expr& e) const;

private:
    std::vector<std::string> indep_;
    std::vector<std::string> dep_;
};

/// Generator sum xi^i d/dy^i + phi^a d/du^a on a jet space.
struct VectorField {
    std::vector<Expr> xi;   // per independent
    std::vector<Expr> phi;  // per dependent
};

/// Applies the prolongation of v (to whatever order F needs) to F.
Expr prolong_apply(const JetSpace& js, const VectorField& v, const Expr& F);

/// Characteristic phi^a - xi^i u^a_i.
Expr characteristic(const JetSpace& js, const VectorField& v, std::size_t dep);

/// Solved form jet = rhs. With `extend`, derivatives of the jet are replaced
/// by the corresponding total derivatives of rhs.
struct JetRule {
    std::size_t dep;
    std::vector<int> alpha;
    Expr rhs;
    bool extend = false;
};

/// Repeatedly substitutes the rules until no ruled jet remains.
Expr reduce_by_rules(const JetSpace& js, const Expr& e, const std::vector<JetRule>& rules, int max_rounds = 12);

}  // namespace redop
