#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "redop/errors.hpp"

namespace redop {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Node kinds, in canonical sort rank order.
enum class Kind : std::uint8_t { Num, Sym, Fn, Log, Exp, Pow, Mul, Add };

struct Node;
struct FunctionSymbol;
using FunctionRef = std::shared_ptr<const FunctionSymbol>;

/**
 * Immutable handle to a canonical expression tree.
 *
 * Every Expr is built through the smart constructors below, which keep the
 * tree in canonical form: sums and products are flattened, sorted and
 * collected, products are distributed over sums, positive integer powers of
 * sums are expanded and sums raised to negative powers are normalized to a
 * unit leading coefficient. Structural equality is therefore meaningful.
 */
class Expr {
public:
    Expr();  // zero
    Expr(int v);
    Expr(long v);
    Expr(long long v);
    Expr(const Rational& v);

    Kind kind() const;
    std::size_t hash() const;

    bool is(Kind k) const { return kind() == k; }
    bool is_num() const { return kind() == Kind::Num; }
    bool is_zero() const;
    bool is_one() const;

    const Rational& value() const;                // Num
    const Rational& exponent() const;             // Pow
    const std::string& name() const;              // Sym
    const FunctionRef& function() const;          // Fn
    const std::vector<int>& orders() const;       // Fn
    const std::vector<Expr>& children() const;    // Fn args, Mul/Add operands
    const Expr& base() const;                     // Pow
    const Expr& arg() const;                      // Exp, Log

    const Node* get() const { return node_.get(); }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

private:
    std::shared_ptr<const Node> node_;
};

/// Declared arbitrary function with a dependency tuple of coordinate names.
/// A rule for slot i gives the first partial derivative along that slot in
/// terms of the formal parameters; this is how quadratures such as
/// H_t = h(t)+1 are declared.
struct FunctionSymbol {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::optional<Expr>> rules;
    std::size_t hash = 0;
    double quadrature_base = 1.0;  // lower limit when the value is computed by quadrature
};

FunctionRef make_function(std::string name, std::vector<std::string> params,
                          std::vector<std::optional<Expr>> rules = {});
bool has_rules(const FunctionSymbol& f);

struct Node {
    Kind kind;
    std::size_t hash = 0;
    Rational num;  // Num value or Pow exponent
    std::string name;
    FunctionRef fn;
    std::vector<int> orders;
    std::vector<Expr> ch;
};

// ---- smart constructors -------------------------------------------------

Expr num(const Rational& v);
Expr num(long long p, long long q);
Expr sym(const std::string& name);
Expr fn(const FunctionRef& f, std::vector<int> orders, std::vector<Expr> args);
/// Application at the formal parameters, f(t,x) for f:(t,x).
Expr fn(const FunctionRef& f);
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Rational& q);
Expr pow(const Expr& base, const Expr& q);
Expr exp(const Expr& a);
Expr log(const Expr& a);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

/// Total order used for canonical sorting.
int compare(const Expr& a, const Expr& b);
struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// ---- structural operations ----------------------------------------------

/// Partial derivative with respect to the symbol `var`.
Expr diff(const Expr& e, const std::string& var);
Expr diff(const Expr& e, const std::string& var, int n);
/// Mixed partial along the given symbol sequence.
Expr diff(const Expr& e, const std::vector<std::string>& vars);

/// Rebuilds the tree through the smart constructors.
Expr simplify(const Expr& e);

struct FunctionBinding {
    Expr body;  // expressed in the function's formal parameters
};

/// Simultaneous substitution of symbols and arbitrary functions.
struct Bindings {
    std::map<std::string, Expr> symbols;
    std::map<std::string, FunctionBinding> functions;
    Bindings& bind(const std::string& s, Expr e) { symbols[s] = std::move(e); return *this; }
    Bindings& bind_function(const std::string& f, Expr body) {
        functions[f] = FunctionBinding{std::move(body)};
        return *this;
    }
};

struct SubstitutionReport {
    std::vector<std::string> unused;  // bindings whose target is absent
};

Expr substitute(const Expr& e, const Bindings& b, SubstitutionReport* report = nullptr);
Expr substitute(const Expr& e, const std::string& s, const Expr& by);

/// Top-down rewrite: nodes for which f returns a value are replaced, the rest
/// are rebuilt from rewritten children.
Expr replace_nodes(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& f);

std::set<std::string> free_symbols(const Expr& e);
/// Names of arbitrary functions occurring anywhere, including inside rules.
std::set<std::string> function_names(const Expr& e);
bool depends_on(const Expr& e, const std::string& var);
bool contains_functions(const Expr& e);

/// Splits a canonical term into numeric coefficient and monomial.
std::pair<Rational, Expr> split_coefficient(const Expr& term);
/// Terms of a canonical sum, or the single term otherwise.
std::vector<Expr> terms_of(const Expr& e);

/// Multiplies through by the common denominator of all terms so that
/// rational identities become polynomial ones. Used by zero testing.
Expr clear_denominators(const Expr& e);
/// Bases that occur with a negative exponent anywhere in the tree.
std::vector<Expr> denominators(const Expr& e);

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);
std::string rational_string(const Rational& q);
double to_double(const Rational& q);

/// Common coordinate symbols.
Expr var_t();
Expr var_x();
Expr var_u();

}  // namespace redop
