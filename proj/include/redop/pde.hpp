#pragma once

#include <optional>

#include "redop/equation.hpp"
#include "redop/transform.hpp"

namespace redop {

/// Quadratures the caller can supply when they fall outside the closed-form
/// integrator: X with X_x = A^(-1/2), and log U1 with the x-derivative that
/// removes the first-order term. Supplied values are checked by differentiation.
struct GaugeHints {
    std::optional<Expr> X;
    std::optional<Expr> Xinv;
    std::optional<Expr> logU1;
};

struct GaugeResult {
    ReducedEquation reduced;
    PointTransformation transform;
};

/// Maps eq to u_t = u_xx - V u with T = t, X = int A^(-1/2) dx and a gauge
/// factor U1. Throws NonQuadrable when a quadrature is out of reach.
GaugeResult gauge_to_reduced(const ParabolicEquation& eq, const GaugeHints& hints = {}, const ProbeConfig& cfg = {});

/// Syntactic classification of the reduced form.
LieCase classify_lie(const ReducedEquation& red, const ProbeConfig& cfg = {});

}  // namespace redop
