#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "redop/expr.hpp"

namespace redop {

using NumericFn = std::function<double(std::span<const double>)>;

/// Numeric callables for arbitrary functions, keyed by name and derivative orders.
class FuncTable {
public:
    FuncTable& set(const std::string& name, std::vector<int> orders, NumericFn f);
    const NumericFn* find(const std::string& name, const std::vector<int>& orders) const;
    bool empty() const { return entries_.empty(); }

    /// Binds a one-variable function given value and derivative callables.
    FuncTable& set_univariate(const std::string& name, std::vector<std::function<double(double)>> derivs);

private:
    std::map<std::pair<std::string, std::vector<int>>, NumericFn> entries_;
};

struct EvalContext {
    std::map<std::string, double> point;
    const FuncTable* funcs = nullptr;
    /// Value for an arbitrary-function node with no callable and no quadrature.
    std::function<double(const Expr& node, std::span<const double> args)> fallback;
};

/// Evaluates in double precision. Throws EvalError on unbound names,
/// division by zero and domain errors. Functions declared with a single-slot
/// derivative rule and no callable are evaluated by adaptive quadrature
/// from their base point.
double eval(const Expr& e, const EvalContext& ctx);
double eval(const Expr& e, const std::map<std::string, double>& point, const FuncTable* funcs = nullptr);

/// Adaptive Gauss-Kronrod (7/15) quadrature.
double integrate_numeric(const std::function<double(double)>& f, double a, double b, double tol = 1e-11);

enum class ZeroKind { ProvenZero, NumericallyZero, NonZero };

struct ZeroVerdict {
    ZeroKind kind = ZeroKind::ProvenZero;
    double max_residual = 0.0;
    std::map<std::string, double> witness;  // NonZero only
    std::uint64_t seed = 0;
    int probes = 0;

    bool is_zero() const { return kind != ZeroKind::NonZero; }
    std::string label() const;
};

struct Box {
    double lo = 0.0;
    double hi = 1.0;
};

struct ProbeConfig {
    std::uint64_t seed = 20240917;
    int points = 25;
    double tolerance = 1e-8;
    std::map<std::string, Box> boxes{{"t", {0.1, 2.0}}, {"x", {0.3, 2.0}}, {"u", {-2.0, 2.0}}};
    Box default_box{0.5, 1.5};
    /// Expressions that must stay away from zero at probe points.
    std::vector<Expr> singular;
    double singular_band = 1e-2;
    /// Points closer than this to a zero of any denominator are rejected.
    double denominator_band = 1e-3;
    std::map<std::string, double> fixed;
    FuncTable funcs;
};

/// Decides whether e vanishes identically: exact canonical zero, zero after
/// clearing denominators, or probing at seeded random points.
ZeroVerdict equals_zero(const Expr& e, const ProbeConfig& cfg = {});

/// Worst of several verdicts (NonZero dominates NumericallyZero dominates ProvenZero).
ZeroVerdict combine(const std::vector<ZeroVerdict>& vs);

/// Deterministic uniform generator used by probing and grids.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform(double lo, double hi);

private:
    std::uint64_t state_;
};

}  // namespace redop
