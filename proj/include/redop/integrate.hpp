#pragma once

#include <optional>
#include <string>

#include "redop/expr.hpp"

namespace redop {

/// Closed-form antiderivative in `var` for sums of terms built from
/// var^n, (a*var+b)^n, exp(a*var+b) times polynomials, and factors free of
/// var. Returns nullopt outside that class.
std::optional<Expr> integrate(const Expr& e, const std::string& var);

/// Closed form if possible, otherwise a new declared function `name(var)`
/// whose derivative rule is the integrand.
Expr integrate_or_declare(const Expr& e, const std::string& var, const std::string& name);

/// Writes e = a*var + b with a, b free of var.
std::optional<std::pair<Expr, Expr>> as_linear(const Expr& e, const std::string& var);

}  // namespace redop
