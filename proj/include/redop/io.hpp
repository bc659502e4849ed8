#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "redop/detsys.hpp"
#include "redop/equation.hpp"
#include "redop/parse.hpp"
#include "redop/transform.hpp"

namespace redop {

/**
 * Block files are line oriented:
 *
 *   # comment
 *   param kappa, mu             named constants
 *   H: (t), H_t = h(t) + 1      function declaration with optional derivative rule
 *   singular: x                 locus the prober must avoid (repeatable)
 *   KEY = expression
 *
 * Equation files use the keys A, B, C, or V for the reduced form.
 * Transformation files use T, X, U1, U0 and optionally Tinv, Xinv.
 */
struct Block {
    std::vector<std::pair<std::string, std::string>> entries;  // KEY = text, in file order
    std::vector<Expr> singular;
};

/// Reads a block, registering parameters and declarations into ctx.
Block read_block(std::istream& in, ParseContext& ctx);
Block read_block_file(const std::string& path, ParseContext& ctx);

struct EquationInput {
    ParabolicEquation eq;
    bool reduced = false;  // given through V
};

EquationInput equation_from_block(const Block& b, ParseContext& ctx);
EquationInput read_equation_file(const std::string& path, ParseContext& ctx);

PointTransformation transformation_from_block(const Block& b, ParseContext& ctx);
PointTransformation read_transformation_file(const std::string& path, ParseContext& ctx);

/// "tau*dt + xi*dx + eta*du", normalized to a canonical reduction operator.
ReductionOperator parse_operator(std::string_view text, ParseContext& ctx, const ProbeConfig& cfg = {});
/// Same syntax, read as tau dt + xi dx + (zeta1 u + zeta0) du.
InfinitesimalOperator parse_infinitesimal(std::string_view text, ParseContext& ctx);

/// Splits on ';' and parses each piece.
std::vector<Expr> parse_list(std::string_view text, ParseContext& ctx);

/// Key/value lines describing an operator: form, then its coefficients.
std::string operator_machine(const ReductionOperator& q);

}  // namespace redop
