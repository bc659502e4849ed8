#include "redop/numeric.hpp"

#include <cmath>
#include <cstdio>

namespace redop {

FuncTable& FuncTable::set(const std::string& name, std::vector<int> orders, NumericFn f) {
    entries_[{name, std::move(orders)}] = std::move(f);
    return *this;
}

const NumericFn* FuncTable::find(const std::string& name, const std::vector<int>& orders) const {
    auto it = entries_.find({name, orders});
    return it == entries_.end() ? nullptr : &it->second;
}

FuncTable& FuncTable::set_univariate(const std::string& name, std::vector<std::function<double(double)>> derivs) {
    for (std::size_t k = 0; k < derivs.size(); ++k) {
        auto g = derivs[k];
        set(name, {static_cast<int>(k)}, [g](std::span<const double> a) { return g(a[0]); });
    }
    return *this;
}

std::uint64_t SplitMix::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix::uniform(double lo, double hi) {
    double r = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * r;
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& kr, double& err) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        double f1 = f(c - dx), f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    kr = resk * h;
    err = std::fabs((resk - resg) * h);
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
    double kr, err;
    gk15(f, a, b, kr, err);
    if (err <= tol || depth > 30) return kr;
    double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1);
}

struct Evaluator {
    const EvalContext& ctx;

    double go(const Expr& e) {
        switch (e.kind()) {
        case Kind::Num: return to_double(e.value());
        case Kind::Sym: {
            auto it = ctx.point.find(e.name());
            if (it == ctx.point.end())
                throw EvalError(EvalError::Reason::Unbound, "no value for symbol '" + e.name() + "'");
            return it->second;
        }
        case Kind::Fn: return function(e);
        case Kind::Log: {
            double v = go(e.arg());
            if (!(v > 0)) throw EvalError(EvalError::Reason::Domain, "log of non-positive value");
            return std::log(v);
        }
        case Kind::Exp: return std::exp(go(e.arg()));
        case Kind::Pow: {
            double b = go(e.base());
            const Rational& q = e.exponent();
            double qd = to_double(q);
            bool integral = boost::multiprecision::denominator(q) == 1;
            if (b == 0.0 && q < 0) throw EvalError(EvalError::Reason::DivisionByZero, "division by zero");
            if (b < 0 && !integral) {
                if (boost::multiprecision::denominator(q) % 2 == 0)
                    throw EvalError(EvalError::Reason::Domain, "even root of negative value");
                double r = std::pow(-b, qd);
                return (boost::multiprecision::numerator(q) % 2 == 0) ? r : -r;
            }
            return std::pow(b, qd);
        }
        case Kind::Mul: {
            double p = 1.0;
            for (const auto& c : e.children()) p *= go(c);
            return p;
        }
        case Kind::Add: {
            double s = 0.0;
            for (const auto& c : e.children()) s += go(c);
            return s;
        }
        }
        return 0.0;
    }

    double function(const Expr& e) {
        std::vector<double> args;
        args.reserve(e.children().size());
        for (const auto& a : e.children()) args.push_back(go(a));
        const auto& f = *e.function();
        if (ctx.funcs) {
            if (const NumericFn* nf = ctx.funcs->find(f.name, e.orders())) return (*nf)(args);
        }
        bool quad = f.params.size() == 1 && f.rules[0] && e.orders()[0] == 0;
        if (quad) {
            try {
                EvalContext inner = ctx;
                // random jets inside an integrand would make the quadrature meaningless
                inner.fallback = nullptr;
                const Expr rule = *f.rules[0];
                const std::string p = f.params[0];
                auto integrand = [&](double s) {
                    inner.point[p] = s;
                    Evaluator ev{inner};
                    return ev.go(rule);
                };
                return integrate_numeric(integrand, f.quadrature_base, args[0]);
            } catch (const EvalError& err) {
                if (err.reason() != EvalError::Reason::Unbound || !ctx.fallback) throw;
            }
        }
        if (ctx.fallback) return ctx.fallback(e, args);
        throw EvalError(EvalError::Reason::Unbound, "no numeric value for function '" + f.name + "'");
    }
};

std::uint64_t hash_key(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

double integrate_numeric(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double scale = std::max(1.0, std::fabs(b - a));
    return adapt(f, a, b, tol * scale, 0);
}

double eval(const Expr& e, const EvalContext& ctx) {
    Evaluator ev{ctx};
    return ev.go(e);
}

double eval(const Expr& e, const std::map<std::string, double>& point, const FuncTable* funcs) {
    EvalContext ctx;
    ctx.point = point;
    ctx.funcs = funcs;
    return eval(e, ctx);
}

std::string ZeroVerdict::label() const {
    switch (kind) {
    case ZeroKind::ProvenZero: return "ProvenZero";
    case ZeroKind::NumericallyZero: return "NumericallyZero";
    case ZeroKind::NonZero: return "NonZero";
    }
    return "?";
}

ZeroVerdict combine(const std::vector<ZeroVerdict>& vs) {
    ZeroVerdict out;
    for (const auto& v : vs) {
        out.seed = v.seed;
        out.probes = std::max(out.probes, v.probes);
        if (static_cast<int>(v.kind) > static_cast<int>(out.kind)) {
            out.kind = v.kind;
            if (v.kind == ZeroKind::NonZero) out.witness = v.witness;
        }
        out.max_residual = std::max(out.max_residual, v.max_residual);
    }
    return out;
}

ZeroVerdict equals_zero(const Expr& e, const ProbeConfig& cfg) {
    ZeroVerdict v;
    v.seed = cfg.seed;
    if (e.is_zero()) return v;
    try {
        if (clear_denominators(e).is_zero()) return v;
    } catch (const EvalError&) {
        // a denominator that is identically zero; fall through to probing
    }

    std::set<std::string> names = free_symbols(e);
    for (const auto& s : cfg.singular)
        for (const auto& n : free_symbols(s)) names.insert(n);
    std::vector<Expr> dens = denominators(e);
    std::vector<Expr> terms = terms_of(e);

    SplitMix rng(cfg.seed);
    int accepted = 0;
    int attempts = 0;
    const int max_attempts = cfg.points * 60;
    v.kind = ZeroKind::NumericallyZero;
    while (accepted < cfg.points && attempts < max_attempts) {
        ++attempts;
        EvalContext ctx;
        for (const auto& n : names) {
            auto fx = cfg.fixed.find(n);
            if (fx != cfg.fixed.end()) {
                ctx.point[n] = fx->second;
                continue;
            }
            auto bx = cfg.boxes.find(n);
            const Box& box = bx == cfg.boxes.end() ? cfg.default_box : bx->second;
            ctx.point[n] = rng.uniform(box.lo, box.hi);
        }
        ctx.funcs = &cfg.funcs;
        std::uint64_t jet_seed = rng.next();
        auto cache = std::make_shared<std::map<std::string, double>>();
        ctx.fallback = [jet_seed, cache, &cfg](const Expr& node, std::span<const double> args) {
            std::string key = node.function()->name;
            for (int o : node.orders()) key += "," + std::to_string(o);
            char buf[64];
            for (double a : args) {
                std::snprintf(buf, sizeof buf, "|%.12g", a);
                key += buf;
            }
            auto it = cache->find(key);
            if (it != cache->end()) return it->second;
            SplitMix g(jet_seed ^ hash_key(key));
            double val = g.uniform(cfg.default_box.lo, cfg.default_box.hi);
            cache->emplace(key, val);
            return val;
        };
        double val = 0.0, scale = 0.0;
        try {
            bool reject = false;
            for (const auto& s : cfg.singular)
                if (std::fabs(eval(s, ctx)) < cfg.singular_band) reject = true;
            for (const auto& d : dens)
                if (!reject && std::fabs(eval(d, ctx)) < cfg.denominator_band) reject = true;
            if (reject) continue;
            val = eval(e, ctx);
            if (terms.size() > 1)
                for (const auto& t : terms) scale += std::fabs(eval(t, ctx));
            else scale = std::fabs(val);
        } catch (const EvalError&) {
            continue;
        }
        if (!std::isfinite(val) || !std::isfinite(scale)) continue;
        ++accepted;
        v.max_residual = std::max(v.max_residual, std::fabs(val));
        if (std::fabs(val) >= cfg.tolerance * (1.0 + scale)) {
            v.kind = ZeroKind::NonZero;
            v.max_residual = std::fabs(val);
            v.witness = ctx.point;
            v.probes = accepted;
            return v;
        }
    }
    v.probes = accepted;
    if (accepted < std::min(cfg.points, 5))
        throw InconclusiveProbe("only " + std::to_string(accepted) + " admissible probe points found");
    return v;
}

}  // namespace redop
