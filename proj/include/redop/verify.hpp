#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "redop/detsys.hpp"
#include "redop/equation.hpp"
#include "redop/numeric.hpp"

namespace redop {

/// Tensor grid over named boxes with seeded jitter. Points within `band`
/// of a zero of any excluded expression are dropped.
struct Grid {
    std::map<std::string, Box> boxes{{"t", {0.1, 2.0}}, {"x", {0.3, 2.0}}, {"u", {-2.0, 2.0}}};
    Box default_box{0.5, 1.5};
    int per_axis = 20;
    std::vector<Expr> excluded;
    double band = 0.1;
    std::uint64_t seed = 20240917;
    FuncTable funcs;

    /// Points covering the given variables; more than three variables fall
    /// back to per_axis^2 seeded random points.
    std::vector<std::map<std::string, double>> points(const std::vector<std::string>& vars) const;
};

enum class Tolerance { Exact, Quadrature };
double tolerance_for(Tolerance t);  // 1e-8 / 1e-4

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string kind;  // verdict label or "grid" / "fd"
    double max_residual = 0.0;
    std::map<std::string, double> witness;
    std::uint64_t seed = 0;
    int points = 0;
    double runtime_ms = 0.0;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    void add(CheckResult c) { checks.push_back(std::move(c)); }
    void merge(const VerificationReport& other);
    bool all_pass() const;
    /// Human-readable; runtimes only when asked, so output stays reproducible.
    std::string text(bool timings = false) const;
    /// One tab-separated line per check: name, verdict, kind, max_residual, seed.
    std::string machine() const;
};

/// Records a zero verdict as a check that passes when `expect_zero` matches.
CheckResult verdict_check(const std::string& name, const ZeroVerdict& v, bool expect_zero = true);

/// Residual L[u] of a candidate solution over the grid; passes when
/// max |L u| < tol (1 + max |u|).
VerificationReport grid_residual(const ParabolicEquation& eq, const Expr& u, const Grid& grid,
                                 double tol = 1e-8, const std::string& name = "grid-residual");

/// Residuals of a determining system for bound unknowns; each point is scaled
/// by the sum of absolute term values.
VerificationReport grid_residual(const DeterminingSystem& sys, const Bindings& candidate, const Grid& grid,
                                 double tol = 1e-8, const std::string& name = "grid-residual");

/// Symbolic first derivatives against central differences with step 1e-5;
/// passes when |d - fd| < 1e-5 (1 + |d|) everywhere.
VerificationReport fd_crosscheck(const Expr& e, const Grid& grid, const std::string& name = "fd");

}  // namespace redop
