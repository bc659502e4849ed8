#include "redop/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "redop/parse.hpp"

namespace redop {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string format_point(const std::map<std::string, double>& p) {
    std::string s;
    for (const auto& [k, v] : p) {
        if (!s.empty()) s += ", ";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.17g", k.c_str(), v);
        s += buf;
    }
    return s;
}

std::vector<std::string> sorted_vars(const std::vector<Expr>& es) {
    std::set<std::string> vs;
    for (const auto& e : es)
        for (const auto& s : free_symbols(e)) vs.insert(s);
    return {vs.begin(), vs.end()};
}

// Sum of |term| at a point, used as the local scale.
double term_scale(const Expr& e, const EvalContext& ctx) {
    double s = 0.0;
    for (const auto& t : terms_of(e)) s += std::fabs(eval(t, ctx));
    return s;
}

}  // namespace

std::vector<std::map<std::string, double>> Grid::points(const std::vector<std::string>& vars) const {
    if (per_axis < 2) throw Error("grid needs at least two points per axis");
    SplitMix rng(seed);
    auto box_of = [&](const std::string& v) {
        auto it = boxes.find(v);
        return it == boxes.end() ? default_box : it->second;
    };
    std::vector<std::map<std::string, double>> raw;
    if (vars.size() <= 3) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < vars.size(); ++i) total *= static_cast<std::size_t>(per_axis);
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::map<std::string, double> p;
            std::size_t rem = idx;
            for (const auto& v : vars) {
                Box b = box_of(v);
                int k = static_cast<int>(rem % per_axis);
                rem /= per_axis;
                double step = (b.hi - b.lo) / (per_axis - 1);
                double jitter = (k == 0 || k == per_axis - 1) ? 0.0 : rng.uniform(-0.25, 0.25) * step;
                p[v] = b.lo + k * step + jitter;
            }
            raw.push_back(std::move(p));
        }
    } else {
        for (int i = 0; i < per_axis * per_axis; ++i) {
            std::map<std::string, double> p;
            for (const auto& v : vars) {
                Box b = box_of(v);
                p[v] = rng.uniform(b.lo, b.hi);
            }
            raw.push_back(std::move(p));
        }
    }
    if (excluded.empty()) return raw;
    std::vector<std::map<std::string, double>> out;
    for (auto& p : raw) {
        EvalContext ctx{p, &funcs, {}};
        bool keep = true;
        for (const auto& ex : excluded) {
            try {
                if (std::fabs(eval(ex, ctx)) < band) keep = false;
            } catch (const EvalError&) {
                keep = false;
            }
            if (!keep) break;
        }
        if (keep) out.push_back(std::move(p));
    }
    return out;
}

double tolerance_for(Tolerance t) { return t == Tolerance::Exact ? 1e-8 : 1e-4; }

void VerificationReport::merge(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool VerificationReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string VerificationReport::text(bool timings) const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name << "  [" << c.kind << "] max_residual=" << format_double(c.max_residual)
           << " points=" << c.points;
        if (timings) os << " time_ms=" << format_double(c.runtime_ms);
        if (!c.witness.empty()) os << " witness{" << format_point(c.witness) << "}";
        os << "\n";
    }
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c.pass ? 0 : 1;
    os << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return os.str();
}

std::string VerificationReport::machine() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << c.name << '\t' << (c.pass ? "PASS" : "FAIL") << '\t' << c.kind << '\t' << format_double(c.max_residual)
           << '\t' << c.seed << '\n';
    return os.str();
}

CheckResult verdict_check(const std::string& name, const ZeroVerdict& v, bool expect_zero) {
    CheckResult c;
    c.name = name;
    c.pass = v.is_zero() == expect_zero;
    c.kind = v.label();
    c.max_residual = v.max_residual;
    c.witness = v.witness;
    c.seed = v.seed;
    c.points = v.probes;
    return c;
}

VerificationReport grid_residual(const ParabolicEquation& eq, const Expr& u, const Grid& grid, double tol,
                                 const std::string& name) {
    auto t0 = Clock::now();
    Expr r = apply_L(eq, u);
    Grid g = grid;
    for (const auto& s : eq.singular) g.excluded.push_back(s);
    std::vector<Expr> involved = g.excluded;
    involved.push_back(r);
    involved.push_back(u);
    auto pts = g.points(sorted_vars(involved));
    CheckResult c;
    c.name = name;
    c.kind = "grid";
    c.seed = grid.seed;
    double scale = 0.0;
    std::map<std::string, double> worst;
    for (const auto& p : pts) {
        EvalContext ctx{p, &g.funcs, {}};
        double v, uv;
        try {
            v = eval(r, ctx);
            uv = eval(u, ctx);
        } catch (const EvalError&) {
            continue;
        }
        if (!std::isfinite(v) || !std::isfinite(uv)) continue;
        ++c.points;
        scale = std::max(scale, std::fabs(uv));
        if (std::fabs(v) >= c.max_residual) {
            c.max_residual = std::fabs(v);
            worst = p;
        }
    }
    if (c.points == 0) throw Error("empty effective grid for " + name);
    c.pass = c.max_residual < tol * (1.0 + scale);
    if (!c.pass) c.witness = worst;
    c.runtime_ms = elapsed_ms(t0);
    VerificationReport rep;
    rep.add(std::move(c));
    return rep;
}

VerificationReport grid_residual(const DeterminingSystem& sys, const Bindings& candidate, const Grid& grid, double tol,
                                 const std::string& name) {
    VerificationReport rep;
    Grid g = grid;
    for (const auto& s : sys.source.singular) g.excluded.push_back(s);
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
        auto t0 = Clock::now();
        Expr r = substitute(sys.equations[i], candidate);
        CheckResult c;
        c.name = name + "[" + std::to_string(i + 1) + "]";
        c.kind = "grid";
        c.seed = grid.seed;
        double worst_ratio = 0.0;
        std::map<std::string, double> worst;
        c.pass = true;
        std::vector<Expr> involved = g.excluded;
        involved.push_back(r);
        for (const auto& p : g.points(sorted_vars(involved))) {
            EvalContext ctx{p, &g.funcs, {}};
            double v, s;
            try {
                v = eval(r, ctx);
                s = term_scale(r, ctx);
            } catch (const EvalError&) {
                continue;
            }
            if (!std::isfinite(v)) continue;
            ++c.points;
            c.max_residual = std::max(c.max_residual, std::fabs(v));
            double ratio = std::fabs(v) / (1.0 + s);
            if (ratio >= worst_ratio) {
                worst_ratio = ratio;
                worst = p;
            }
        }
        if (c.points == 0) throw Error("empty effective grid for " + c.name);
        c.pass = worst_ratio < tol;
        if (!c.pass) c.witness = worst;
        c.runtime_ms = elapsed_ms(t0);
        rep.add(std::move(c));
    }
    return rep;
}

VerificationReport fd_crosscheck(const Expr& e, const Grid& grid, const std::string& name) {
    constexpr double h = 1e-5;
    VerificationReport rep;
    auto vars = sorted_vars({e});
    for (const auto& v : vars) {
        if (!is_coordinate(v)) continue;
        auto t0 = Clock::now();
        Expr d = diff(e, v);
        CheckResult c;
        c.name = name + "/d" + v;
        c.kind = "fd";
        c.seed = grid.seed;
        double worst_ratio = 0.0;
        std::map<std::string, double> worst;
        for (const auto& p : grid.points(vars)) {
            EvalContext ctx{p, &grid.funcs, {}};
            auto plus = p, minus = p;
            plus[v] += h;
            minus[v] -= h;
            double dv, fp, fm;
            try {
                dv = eval(d, ctx);
                fp = eval(e, EvalContext{plus, &grid.funcs, {}});
                fm = eval(e, EvalContext{minus, &grid.funcs, {}});
            } catch (const EvalError&) {
                continue;
            }
            if (!std::isfinite(dv) || !std::isfinite(fp) || !std::isfinite(fm)) continue;
            ++c.points;
            double err = std::fabs(dv - (fp - fm) / (2 * h));
            c.max_residual = std::max(c.max_residual, err);
            double ratio = err / (1.0 + std::fabs(dv));
            if (ratio >= worst_ratio) {
                worst_ratio = ratio;
                worst = p;
            }
        }
        if (c.points == 0) throw Error("empty effective grid for " + c.name);
        c.pass = worst_ratio < 1e-5;
        if (!c.pass) c.witness = worst;
        c.runtime_ms = elapsed_ms(t0);
        rep.add(std::move(c));
    }
    return rep;
}

}  // namespace redop
