#include "redop/integrate.hpp"

namespace redop {

std::optional<std::pair<Expr, Expr>> as_linear(const Expr& e, const std::string& var) {
    Expr a = diff(e, var);
    if (depends_on(a, var)) return std::nullopt;
    Expr b = e - a * sym(var);
    if (depends_on(b, var)) return std::nullopt;
    return std::make_pair(a, b);
}

namespace {

bool is_int(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

/// Antiderivative of s^n in s.
Expr power_rule(const Expr& s, const Rational& n) {
    if (n == -1) return log(s);
    return pow(s, n + 1) / num(n + 1);
}

std::optional<Expr> integrate_term(const Expr& term, const std::string& var) {
    const Expr v = sym(var);
    std::vector<Expr> fs = term.is(Kind::Mul) ? term.children() : std::vector<Expr>{term};
    std::vector<Expr> constant;
    Rational var_power = 0;
    std::optional<Expr> linear_base;
    Rational linear_power = 0;
    std::optional<Expr> exp_arg;
    for (const auto& f : fs) {
        if (!depends_on(f, var)) {
            constant.push_back(f);
            continue;
        }
        if (f == v) {
            var_power += 1;
            continue;
        }
        if (f.is(Kind::Pow) && f.base() == v) {
            var_power += f.exponent();
            continue;
        }
        if (f.is(Kind::Pow) && f.base().is(Kind::Add) && !linear_base && as_linear(f.base(), var)) {
            linear_base = f.base();
            linear_power = f.exponent();
            continue;
        }
        if (f.is(Kind::Exp) && !exp_arg && as_linear(f.arg(), var)) {
            exp_arg = f.arg();
            continue;
        }
        return std::nullopt;
    }
    Expr c = mul(constant);
    if (exp_arg) {
        if (linear_base || var_power < 0 || !is_int(var_power)) return std::nullopt;
        Expr a = as_linear(*exp_arg, var)->first;
        // int v^m e^{a v + b} = e^{a v + b} sum_k (-1)^k m!/(m-k)! v^{m-k} / a^{k+1}
        int m = var_power.convert_to<int>();
        std::vector<Expr> parts;
        Rational falling = 1;
        for (int k = 0; k <= m; ++k) {
            if (k > 0) falling *= (m - k + 1);
            Rational sign = (k % 2) ? -1 : 1;
            parts.push_back(num(sign * falling) * pow(v, Rational(m - k)) * pow(a, Rational(-(k + 1))));
        }
        return c * exp(*exp_arg) * add(parts);
    }
    if (!linear_base) return c * power_rule(v, var_power);
    if (var_power < 0 || !is_int(var_power)) return std::nullopt;
    // substitute s = a v + b, v = (s - b)/a, dv = ds/a
    auto [a, b] = *as_linear(*linear_base, var);
    const std::string sname = "@s";
    Expr s = sym(sname);
    Expr vs = pow((s - b) / a, var_power) * pow(s, linear_power);
    std::vector<Expr> pieces;
    for (const auto& t : terms_of(vs)) {
        auto [k, mono] = split_coefficient(t);
        std::vector<Expr> mf = mono.is(Kind::Mul) ? mono.children() : std::vector<Expr>{mono};
        Rational n = 0;
        std::vector<Expr> rest;
        if (!mono.is_one()) {
            for (const auto& f : mf) {
                if (f == s) n += 1;
                else if (f.is(Kind::Pow) && f.base() == s) n += f.exponent();
                else rest.push_back(f);
            }
        }
        for (const auto& r : rest)
            if (depends_on(r, sname)) return std::nullopt;
        pieces.push_back(num(k) * mul(rest) * power_rule(s, n));
    }
    return c * substitute(add(pieces), sname, *linear_base) / a;
}

}  // namespace

std::optional<Expr> integrate(const Expr& e, const std::string& var) {
    std::vector<Expr> out;
    for (const auto& t : terms_of(e)) {
        auto r = integrate_term(t, var);
        if (!r) return std::nullopt;
        out.push_back(*r);
    }
    return add(std::move(out));
}

Expr integrate_or_declare(const Expr& e, const std::string& var, const std::string& name) {
    if (auto r = integrate(e, var)) return *r;
    auto f = make_function(name, {var}, {e});
    return fn(f);
}

}  // namespace redop
