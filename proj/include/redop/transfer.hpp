#pragma once

#include <string>
#include <vector>

#include "redop/construct.hpp"
#include "redop/detsys.hpp"

namespace redop {

/// u_t = u_xx + (h(t)/x) u_x together with H = int (h+1) dt.
struct TransferEquation {
    Expr h;
    ParabolicEquation eq;
    Expr H;  // closed form, or the declared function H(t) with H_t = h + 1
};

/// Throws SignatureMismatch if h depends on x or u.
TransferEquation transfer_equation(const Expr& h);

/// d_t - (h+1)/x d_x,  (2t+kappa) d_x - x u d_u,  d_x + nu x d_u.
std::vector<ReductionOperator> canonical_operators(const TransferEquation& te, const Expr& kappa, const Expr& nu);

/// R = int (h+1)/(2t+kappa) dt, closed form or declared R(t).
Expr gaussian_quadrature(const TransferEquation& te, const Expr& kappa);

/// u = c1 exp(-x^2/(2(2t+kappa)) - R).
SolutionFamily invariant_solution_Gk(const TransferEquation& te, const Expr& kappa, const Expr& c1 = sym("c1"));

/// u = c2 (x^2 + 2H) + c1.
SolutionFamily quadratic_family(const TransferEquation& te);

struct SeriesSolution {
    enum class Kind { Polynomial, Gaussian };
    Kind kind = Kind::Polynomial;
    int N = 0;
    Expr kappa = 0;
    Expr R = 0;                     // Gaussian only
    std::vector<Expr> coefficients; // T^k or S^k, k = 0..N
    std::vector<std::string> constants;
    Expr u;
};

/// sum_k T^k(t) x^(2k) with T^N = prefix N and each T^k fixed up to the constant prefix k.
SeriesSolution polynomial_series(const TransferEquation& te, int N, const std::string& prefix = "a");
/// sum_k S^k(t) (x/(2t+kappa))^(2k) exp(-x^2/(2(2t+kappa)) - R).
SeriesSolution gaussian_series(const TransferEquation& te, int N, const Expr& kappa, const std::string& prefix = "a");

/// Left-hand sides of the coefficient recurrences, one per k (all must vanish).
std::vector<Expr> series_recurrence_residuals(const TransferEquation& te, const SeriesSolution& s);

}  // namespace redop
