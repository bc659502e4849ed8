#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "redop/expr.hpp"

namespace redop {

/// Names known to the parser. t, x and u are always coordinates.
struct ParseContext {
    std::map<std::string, FunctionRef> functions;
    std::set<std::string> parameters;
    /// f(t,x) with an undeclared f and distinct coordinate arguments declares f.
    bool implicit_functions = true;
    /// Accept dt, dx, du as placeholders when reading vector fields.
    bool operator_symbols = false;

    ParseContext& declare_parameter(const std::string& name) {
        parameters.insert(name);
        return *this;
    }
    ParseContext& declare_function(const FunctionRef& f) {
        functions[f->name] = f;
        return *this;
    }
};

bool is_coordinate(const std::string& name);

/// Parses an expression. Implicitly declared functions are recorded in ctx.
Expr parse(std::string_view text, ParseContext& ctx);
Expr parse(std::string_view text);

/// Reads "name: (t,x)" or "name: (t), name_t = expr" and registers the function.
FunctionRef parse_declaration(std::string_view text, ParseContext& ctx);

}  // namespace redop
