#include "redop/expr.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace redop {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_string(const std::string& s) {
    std::size_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t hash_rational(const Rational& q) {
    return hash_string(q.str());
}

bool is_integer(const Rational& q) { return mp::denominator(q) == 1; }

int kind_rank(Kind k) { return static_cast<int>(k); }

std::shared_ptr<Node> new_node(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

Expr finish(std::shared_ptr<Node> n) {
    std::size_t h = mix(0x51ed27, static_cast<std::size_t>(n->kind));
    switch (n->kind) {
    case Kind::Num: h = mix(h, hash_rational(n->num)); break;
    case Kind::Sym: h = mix(h, hash_string(n->name)); break;
    case Kind::Fn:
        h = mix(h, n->fn->hash);
        for (int o : n->orders) h = mix(h, static_cast<std::size_t>(o));
        break;
    case Kind::Pow: h = mix(h, hash_rational(n->num)); break;
    default: break;
    }
    for (const auto& c : n->ch) h = mix(h, c.hash());
    n->hash = h;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr raw_num(const Rational& v) {
    auto n = new_node(Kind::Num);
    n->num = v;
    return finish(std::move(n));
}

const Expr& zero_expr() {
    static const Expr z = raw_num(0);
    return z;
}
const Expr& one_expr() {
    static const Expr o = raw_num(1);
    return o;
}

Expr raw_pow(const Expr& b, const Rational& q) {
    auto n = new_node(Kind::Pow);
    n->num = q;
    n->ch = {b};
    return finish(std::move(n));
}

Expr raw_unary(Kind k, const Expr& a) {
    auto n = new_node(k);
    n->ch = {a};
    return finish(std::move(n));
}

Expr raw_nary(Kind k, std::vector<Expr> ch) {
    auto n = new_node(k);
    n->ch = std::move(ch);
    return finish(std::move(n));
}

/// coefficient * monomial, monomial already canonical and coefficient free.
Expr make_term(const Rational& c, const Expr& m) {
    if (c == 0) return zero_expr();
    if (m.is_one()) return raw_num(c);
    if (c == 1) return m;
    std::vector<Expr> ch{raw_num(c)};
    if (m.is(Kind::Mul)) {
        ch.insert(ch.end(), m.children().begin(), m.children().end());
    } else {
        ch.push_back(m);
    }
    return raw_nary(Kind::Mul, std::move(ch));
}

std::optional<BigInt> exact_root(const BigInt& a, unsigned n) {
    if (a < 0) return std::nullopt;
    if (a < 2) return a;
    // bisection on [0, 2^(bits/n + 1)]
    unsigned bits = mp::msb(a) + 1;
    BigInt lo = 0;
    BigInt hi = BigInt(1) << (bits / n + 1);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (mp::pow(mid, n) <= a) lo = mid;
        else hi = mid - 1;
    }
    if (mp::pow(lo, n) == a) return lo;
    return std::nullopt;
}

Rational rpow_int(const Rational& v, const BigInt& n) {
    if (n == 0) return 1;
    if (v == 0) {
        if (n < 0) throw EvalError(EvalError::Reason::DivisionByZero, "0 raised to a negative power");
        return 0;
    }
    BigInt an = n < 0 ? BigInt(-n) : n;
    unsigned e = an.convert_to<unsigned>();
    BigInt p = mp::pow(mp::numerator(v), e);
    BigInt q = mp::pow(mp::denominator(v), e);
    if (n < 0) std::swap(p, q);
    if (q < 0) {
        p = -p;
        q = -q;
    }
    return Rational(p, q);
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

Expr pow_num(const Rational& v, const Rational& q) {
    if (is_integer(q)) return raw_num(rpow_int(v, mp::numerator(q)));
    if (v == 0) {
        if (q < 0) throw EvalError(EvalError::Reason::DivisionByZero, "0 raised to a negative power");
        return zero_expr();
    }
    if (v == 1) return one_expr();
    BigInt p = mp::numerator(q);
    BigInt d = mp::denominator(q);
    if (v > 0 && d < 64) {
        unsigned dd = d.convert_to<unsigned>();
        auto rn = exact_root(mp::numerator(v), dd);
        auto rd = exact_root(mp::denominator(v), dd);
        if (rn && rd) return raw_num(rpow_int(Rational(*rn, *rd), p));
    }
    if (v < 0) return raw_pow(raw_num(v), q);
    // v^(k + r) with 0 < r < 1
    BigInt k = floor_div(p, d);
    Rational r = q - Rational(k);
    Expr frac = raw_pow(raw_num(v), r);
    if (k == 0) return frac;
    return make_term(rpow_int(v, k), frac);
}

/// Writes a sum as c * s with the leading term of s having coefficient 1.
std::pair<Rational, Expr> monic(const Expr& s) {
    Rational c = split_coefficient(s.children().front()).first;
    if (c == 1) return {Rational(1), s};
    std::vector<Expr> ch;
    ch.reserve(s.children().size());
    for (const auto& t : s.children()) {
        auto [ci, mi] = split_coefficient(t);
        ch.push_back(make_term(ci / c, mi));
    }
    return {c, raw_nary(Kind::Add, std::move(ch))};
}

void flatten_into(Kind k, const Expr& e, std::vector<Expr>& out) {
    if (e.is(k)) {
        for (const auto& c : e.children()) out.push_back(c);
    } else {
        out.push_back(e);
    }
}

Expr build_product(const Rational& coeff, std::vector<Expr> factors) {
    if (coeff == 0) return zero_expr();
    std::sort(factors.begin(), factors.end(), ExprLess{});
    if (factors.empty()) return raw_num(coeff);
    if (factors.size() == 1 && coeff == 1) return factors.front();
    std::vector<Expr> ch;
    if (coeff != 1) ch.push_back(raw_num(coeff));
    ch.insert(ch.end(), factors.begin(), factors.end());
    return raw_nary(Kind::Mul, std::move(ch));
}

/// Product of two expanded expressions, term by term.
Expr distribute(const Expr& a, const Expr& b) {
    auto ta = terms_of(a);
    auto tb = terms_of(b);
    std::vector<Expr> out;
    out.reserve(ta.size() * tb.size());
    for (const auto& x : ta)
        for (const auto& y : tb) out.push_back(mul({x, y}));
    return add(std::move(out));
}

}  // namespace

// ---- Expr accessors -------------------------------------------------------

Expr::Expr() : node_(zero_expr().node_) {}
Expr::Expr(int v) : Expr(Rational(v)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(long long v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& v) : node_(raw_num(v).node_) {}

Kind Expr::kind() const { return node_->kind; }
std::size_t Expr::hash() const { return node_->hash; }
bool Expr::is_zero() const { return node_->kind == Kind::Num && node_->num == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Num && node_->num == 1; }
const Rational& Expr::value() const { return node_->num; }
const Rational& Expr::exponent() const { return node_->num; }
const std::string& Expr::name() const { return node_->name; }
const FunctionRef& Expr::function() const { return node_->fn; }
const std::vector<int>& Expr::orders() const { return node_->orders; }
const std::vector<Expr>& Expr::children() const { return node_->ch; }
const Expr& Expr::base() const { return node_->ch.front(); }
const Expr& Expr::arg() const { return node_->ch.front(); }

bool operator==(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
    return compare(a, b) == 0;
}

// ---- ordering ---------------------------------------------------------------

int compare(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    auto cmp_r = [](const Rational& p, const Rational& q) { return p < q ? -1 : (q < p ? 1 : 0); };
    auto cmp_children = [](const std::vector<Expr>& x, const std::vector<Expr>& y) {
        std::size_t n = std::min(x.size(), y.size());
        for (std::size_t i = 0; i < n; ++i) {
            int c = compare(x[i], y[i]);
            if (c) return c;
        }
        if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
        return 0;
    };
    switch (a.kind()) {
    case Kind::Num: return cmp_r(a.value(), b.value());
    case Kind::Sym: return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Fn: {
        const auto& fa = *a.function();
        const auto& fb = *b.function();
        if (fa.name != fb.name) return fa.name < fb.name ? -1 : 1;
        if (fa.params != fb.params) return fa.params < fb.params ? -1 : 1;
        if (a.orders() != b.orders()) return a.orders() < b.orders() ? -1 : 1;
        int c = cmp_children(a.children(), b.children());
        if (c) return c;
        if (fa.hash != fb.hash) return fa.hash < fb.hash ? -1 : 1;
        return 0;
    }
    case Kind::Log:
    case Kind::Exp: return compare(a.arg(), b.arg());
    case Kind::Pow: {
        int c = compare(a.base(), b.base());
        if (c) return c;
        return cmp_r(a.exponent(), b.exponent());
    }
    case Kind::Mul:
    case Kind::Add: return cmp_children(a.children(), b.children());
    }
    return 0;
}

// ---- function symbols -----------------------------------------------------

FunctionRef make_function(std::string name, std::vector<std::string> params,
                          std::vector<std::optional<Expr>> rules) {
    auto f = std::make_shared<FunctionSymbol>();
    f->name = std::move(name);
    f->params = std::move(params);
    rules.resize(f->params.size());
    f->rules = std::move(rules);
    std::size_t h = hash_string(f->name);
    for (const auto& p : f->params) h = mix(h, hash_string(p));
    for (const auto& r : f->rules) h = mix(h, r ? r->hash() : 0x77);
    f->hash = h;
    return f;
}

bool has_rules(const FunctionSymbol& f) {
    return std::any_of(f.rules.begin(), f.rules.end(), [](const auto& r) { return r.has_value(); });
}

// ---- smart constructors ---------------------------------------------------

Expr num(const Rational& v) { return raw_num(v); }
Expr num(long long p, long long q) { return raw_num(Rational(p) / Rational(q)); }

Expr sym(const std::string& name) {
    auto n = new_node(Kind::Sym);
    n->name = name;
    return finish(std::move(n));
}

Expr fn(const FunctionRef& f, std::vector<int> orders, std::vector<Expr> args) {
    if (args.size() != f->params.size())
        throw SignatureMismatch("function " + f->name + " expects " + std::to_string(f->params.size()) +
                                " arguments");
    orders.resize(f->params.size(), 0);
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] > 0 && f->rules[i]) {
            Expr d = *f->rules[i];
            for (std::size_t j = 0; j < orders.size(); ++j) {
                int k = orders[j] - (j == i ? 1 : 0);
                if (k > 0) d = diff(d, f->params[j], k);
            }
            Bindings b;
            for (std::size_t j = 0; j < args.size(); ++j) b.bind(f->params[j], args[j]);
            return substitute(d, b);
        }
    }
    auto n = new_node(Kind::Fn);
    n->fn = f;
    n->orders = std::move(orders);
    n->ch = std::move(args);
    return finish(std::move(n));
}

Expr fn(const FunctionRef& f) {
    std::vector<Expr> args;
    for (const auto& p : f->params) args.push_back(sym(p));
    return fn(f, std::vector<int>(f->params.size(), 0), std::move(args));
}

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
    if (term.is_num()) return {term.value(), one_expr()};
    if (term.is(Kind::Mul) && term.children().front().is_num()) {
        const auto& ch = term.children();
        if (ch.size() == 2) return {ch[0].value(), ch[1]};
        return {ch[0].value(), raw_nary(Kind::Mul, std::vector<Expr>(ch.begin() + 1, ch.end()))};
    }
    return {Rational(1), term};
}

std::vector<Expr> terms_of(const Expr& e) {
    if (e.is(Kind::Add)) return e.children();
    if (e.is_zero()) return {};
    return {e};
}

Expr add(std::vector<Expr> in) {
    std::vector<Expr> flat;
    flat.reserve(in.size());
    for (const auto& e : in) flatten_into(Kind::Add, e, flat);
    Rational constant = 0;
    std::vector<std::pair<Expr, Rational>> mono;
    mono.reserve(flat.size());
    for (const auto& t : flat) {
        if (t.is_num()) {
            constant += t.value();
            continue;
        }
        auto [c, m] = split_coefficient(t);
        mono.emplace_back(m, c);
    }
    std::sort(mono.begin(), mono.end(),
              [](const auto& p, const auto& q) { return compare(p.first, q.first) < 0; });
    std::vector<Expr> out;
    if (constant != 0) out.push_back(raw_num(constant));
    for (std::size_t i = 0; i < mono.size();) {
        Rational c = mono[i].second;
        std::size_t j = i + 1;
        while (j < mono.size() && mono[j].first == mono[i].first) c += mono[j++].second;
        if (c != 0) out.push_back(make_term(c, mono[i].first));
        i = j;
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out.front();
    return raw_nary(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> in) {
    std::vector<Expr> flat;
    flat.reserve(in.size());
    for (const auto& e : in) flatten_into(Kind::Mul, e, flat);

    Rational coeff = 1;
    std::vector<std::pair<Expr, Rational>> pw;
    std::vector<Expr> exps;
    for (const auto& f : flat) {
        switch (f.kind()) {
        case Kind::Num:
            coeff *= f.value();
            if (coeff == 0) return zero_expr();
            break;
        case Kind::Pow: pw.emplace_back(f.base(), f.exponent()); break;
        case Kind::Exp: exps.push_back(f.arg()); break;
        case Kind::Add: {
            auto [c, s] = monic(f);
            coeff *= c;
            pw.emplace_back(s, Rational(1));
            break;
        }
        default: pw.emplace_back(f, Rational(1)); break;
        }
    }
    std::sort(pw.begin(), pw.end(), [](const auto& p, const auto& q) { return compare(p.first, q.first) < 0; });

    std::vector<Expr> factors;
    std::vector<Expr> sums;
    bool redo = false;
    for (std::size_t i = 0; i < pw.size();) {
        Rational q = pw[i].second;
        std::size_t j = i + 1;
        while (j < pw.size() && pw[j].first == pw[i].first) q += pw[j++].second;
        const Expr& b = pw[i].first;
        i = j;
        if (q == 0) continue;
        Expr r = pow(b, q);
        switch (r.kind()) {
        case Kind::Num: coeff *= r.value(); break;
        case Kind::Add: sums.push_back(r); break;
        case Kind::Mul:
            redo = true;
            factors.push_back(r);
            break;
        case Kind::Exp: exps.push_back(r.arg()); break;
        default: factors.push_back(r); break;
        }
    }
    if (coeff == 0) return zero_expr();
    if (!exps.empty()) {
        Expr e = exp(add(std::move(exps)));
        if (e.is_num()) coeff *= e.value();
        else factors.push_back(e);
    }
    if (redo) {
        std::vector<Expr> again{raw_num(coeff)};
        again.insert(again.end(), factors.begin(), factors.end());
        again.insert(again.end(), sums.begin(), sums.end());
        return mul(std::move(again));
    }
    Expr prod = build_product(coeff, std::move(factors));
    if (sums.empty()) return prod;
    std::vector<Expr> acc{prod};
    for (const auto& s : sums) {
        std::vector<Expr> next;
        next.reserve(acc.size() * s.children().size());
        for (const auto& a : acc)
            for (const auto& t : s.children()) next.push_back(mul({a, t}));
        acc = terms_of(add(std::move(next)));
        if (acc.empty()) return zero_expr();
    }
    return add(std::move(acc));
}

Expr pow(const Expr& b, const Rational& q) {
    if (q == 0) return one_expr();
    if (q == 1) return b;
    switch (b.kind()) {
    case Kind::Num: return pow_num(b.value(), q);
    case Kind::Pow:
        if (is_integer(q)) return pow(b.base(), b.exponent() * q);
        return raw_pow(b, q);
    case Kind::Exp: return exp(mul({raw_num(q), b.arg()}));
    case Kind::Mul: {
        if (is_integer(q)) {
            std::vector<Expr> fs;
            for (const auto& f : b.children()) fs.push_back(pow(f, q));
            return mul(std::move(fs));
        }
        auto [c, rest] = split_coefficient(b);
        if (c > 0 && c != 1) return mul({pow_num(c, q), pow(rest, q)});
        return raw_pow(b, q);
    }
    case Kind::Add: {
        auto [c, s] = monic(b);
        if (c != 1) {
            if (is_integer(q) || c > 0) return mul({pow_num(c, q), pow(s, q)});
            return raw_pow(b, q);
        }
        if (is_integer(q) && q > 0) {
            unsigned n = mp::numerator(q).convert_to<unsigned>();
            Expr result = one_expr();
            Expr sq = s;
            while (n) {
                if (n & 1U) result = distribute(result, sq);
                n >>= 1U;
                if (n) sq = distribute(sq, sq);
            }
            return result;
        }
        return raw_pow(s, q);
    }
    default: return raw_pow(b, q);
    }
}

Expr pow(const Expr& base, const Expr& q) {
    if (q.is_num()) return pow(base, q.value());
    return exp(mul({q, log(base)}));
}

Expr exp(const Expr& a) {
    if (a.is_zero()) return one_expr();
    return raw_unary(Kind::Exp, a);
}

Expr log(const Expr& a) {
    if (a.is_one()) return zero_expr();
    if (a.is(Kind::Exp)) return a.arg();
    if (a.is_num() && a.value() <= 0) throw EvalError(EvalError::Reason::Domain, "log of non-positive constant");
    return raw_unary(Kind::Log, a);
}

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({raw_num(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw EvalError(EvalError::Reason::DivisionByZero, "division by zero");
    return mul({a, pow(b, Rational(-1))});
}
Expr operator-(const Expr& a) { return mul({raw_num(-1), a}); }
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr var_t() { static const Expr s = sym("t"); return s; }
Expr var_x() { static const Expr s = sym("x"); return s; }
Expr var_u() { static const Expr s = sym("u"); return s; }

// ---- traversal helpers ----------------------------------------------------

namespace {

void collect_symbols(const Expr& e, std::set<std::string>& out, std::unordered_set<const Node*>& seen,
                     std::unordered_set<const FunctionSymbol*>& fseen) {
    if (!seen.insert(e.get()).second) return;
    if (e.is(Kind::Sym)) {
        out.insert(e.name());
        return;
    }
    if (e.is(Kind::Fn)) {
        const auto& f = *e.function();
        if (fseen.insert(&f).second) {
            for (const auto& r : f.rules) {
                if (!r) continue;
                std::set<std::string> inner;
                collect_symbols(*r, inner, seen, fseen);
                for (const auto& s : inner)
                    if (std::find(f.params.begin(), f.params.end(), s) == f.params.end()) out.insert(s);
            }
        }
    }
    for (const auto& c : e.children()) collect_symbols(c, out, seen, fseen);
}

void collect_functions(const Expr& e, std::set<std::string>& out, std::unordered_set<const Node*>& seen) {
    if (!seen.insert(e.get()).second) return;
    if (e.is(Kind::Fn)) {
        out.insert(e.function()->name);
        for (const auto& r : e.function()->rules)
            if (r) collect_functions(*r, out, seen);
    }
    for (const auto& c : e.children()) collect_functions(c, out, seen);
}

}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    std::unordered_set<const Node*> seen;
    std::unordered_set<const FunctionSymbol*> fseen;
    collect_symbols(e, out, seen, fseen);
    return out;
}

std::set<std::string> function_names(const Expr& e) {
    std::set<std::string> out;
    std::unordered_set<const Node*> seen;
    collect_functions(e, out, seen);
    return out;
}

bool depends_on(const Expr& e, const std::string& var) { return free_symbols(e).count(var) > 0; }

bool contains_functions(const Expr& e) { return !function_names(e).empty(); }

// ---- differentiation ------------------------------------------------------

namespace {

/// d/dp of a quadrature-declared function whose rule depends on p: a new
/// function with the differentiated rule and the same base point.
FunctionRef parameter_derivative(const FunctionRef& f, const std::string& p) {
    std::vector<std::optional<Expr>> rules;
    for (const auto& r : f->rules) rules.push_back(r ? std::optional<Expr>(diff(*r, p)) : std::nullopt);
    auto g = make_function(f->name + "_d" + p, f->params, std::move(rules));
    auto gm = std::const_pointer_cast<FunctionSymbol>(g);
    gm->quadrature_base = f->quadrature_base;
    return g;
}

struct Differ {
    const std::string& v;
    std::unordered_map<const Node*, Expr> memo;

    Expr go(const Expr& e) {
        switch (e.kind()) {
        case Kind::Num: return zero_expr();
        case Kind::Sym: return e.name() == v ? one_expr() : zero_expr();
        default: break;
        }
        auto it = memo.find(e.get());
        if (it != memo.end()) return it->second;
        Expr r = compute(e);
        memo.emplace(e.get(), r);
        return r;
    }

    Expr compute(const Expr& e) {
        switch (e.kind()) {
        case Kind::Fn: {
            std::vector<Expr> terms;
            const auto& args = e.children();
            for (std::size_t i = 0; i < args.size(); ++i) {
                Expr d = go(args[i]);
                if (d.is_zero()) continue;
                auto o = e.orders();
                o[i] += 1;
                terms.push_back(mul({fn(e.function(), o, args), d}));
            }
            const auto& f = e.function();
            if (has_rules(*f)) {
                bool param_dep = false;
                for (const auto& r : f->rules)
                    if (r && std::find(f->params.begin(), f->params.end(), v) == f->params.end() &&
                        depends_on(*r, v))
                        param_dep = true;
                if (param_dep) terms.push_back(fn(parameter_derivative(f, v), e.orders(), args));
            }
            return add(std::move(terms));
        }
        case Kind::Log: return mul({go(e.arg()), pow(e.arg(), Rational(-1))});
        case Kind::Exp: return mul({e, go(e.arg())});
        case Kind::Pow: {
            Expr db = go(e.base());
            if (db.is_zero()) return zero_expr();
            return mul({raw_num(e.exponent()), pow(e.base(), e.exponent() - 1), db});
        }
        case Kind::Mul: {
            const auto& ch = e.children();
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < ch.size(); ++i) {
                Expr d = go(ch[i]);
                if (d.is_zero()) continue;
                std::vector<Expr> fs = ch;
                fs[i] = d;
                terms.push_back(mul(std::move(fs)));
            }
            return add(std::move(terms));
        }
        case Kind::Add: {
            std::vector<Expr> terms;
            for (const auto& c : e.children()) terms.push_back(go(c));
            return add(std::move(terms));
        }
        default: return zero_expr();
        }
    }
};

}  // namespace

Expr diff(const Expr& e, const std::string& var) {
    Differ d{var, {}};
    return d.go(e);
}

Expr diff(const Expr& e, const std::string& var, int n) {
    Expr r = e;
    for (int i = 0; i < n; ++i) r = diff(r, var);
    return r;
}

Expr diff(const Expr& e, const std::vector<std::string>& vars) {
    Expr r = e;
    for (const auto& v : vars) r = diff(r, v);
    return r;
}

// ---- rebuild / substitute ---------------------------------------------------

namespace {

struct Rebuilder {
    const Bindings& b;
    std::unordered_map<const Node*, Expr> memo;
    std::unordered_map<const FunctionSymbol*, FunctionRef> fmemo;
    std::set<std::string> used;

    FunctionRef rebuild_symbol(const FunctionRef& f) {
        if (!has_rules(*f)) return f;
        auto it = fmemo.find(f.get());
        if (it != fmemo.end()) return it->second;
        Bindings inner;
        for (const auto& [k, v] : b.symbols)
            if (std::find(f->params.begin(), f->params.end(), k) == f->params.end()) inner.symbols[k] = v;
        inner.functions = b.functions;
        std::vector<std::optional<Expr>> rules;
        bool changed = false;
        for (const auto& r : f->rules) {
            if (!r) {
                rules.push_back(std::nullopt);
                continue;
            }
            Rebuilder sub{inner, {}, {}, {}};
            Expr nr = sub.go(*r);
            for (const auto& u : sub.used) used.insert(u);
            changed = changed || !(nr == *r);
            rules.push_back(nr);
        }
        FunctionRef out = f;
        if (changed) {
            out = make_function(f->name, f->params, std::move(rules));
            std::const_pointer_cast<FunctionSymbol>(out)->quadrature_base = f->quadrature_base;
        }
        fmemo.emplace(f.get(), out);
        return out;
    }

    Expr go(const Expr& e) {
        if (e.is_num()) return e;
        auto it = memo.find(e.get());
        if (it != memo.end()) return it->second;
        Expr r = compute(e);
        memo.emplace(e.get(), r);
        return r;
    }

    Expr compute(const Expr& e) {
        switch (e.kind()) {
        case Kind::Sym: {
            auto it = b.symbols.find(e.name());
            if (it == b.symbols.end()) return e;
            used.insert(e.name());
            return it->second;
        }
        case Kind::Fn: {
            std::vector<Expr> args;
            for (const auto& a : e.children()) args.push_back(go(a));
            const auto& f = e.function();
            auto fb = b.functions.find(f->name);
            if (fb != b.functions.end()) {
                used.insert(f->name);
                Expr d = fb->second.body;
                for (std::size_t j = 0; j < f->params.size(); ++j)
                    if (e.orders()[j] > 0) d = diff(d, f->params[j], e.orders()[j]);
                Bindings pb;
                for (std::size_t j = 0; j < args.size(); ++j) pb.bind(f->params[j], args[j]);
                return substitute(d, pb);
            }
            return fn(rebuild_symbol(f), e.orders(), std::move(args));
        }
        case Kind::Log: return log(go(e.arg()));
        case Kind::Exp: return exp(go(e.arg()));
        case Kind::Pow: return pow(go(e.base()), e.exponent());
        case Kind::Mul: {
            std::vector<Expr> fs;
            for (const auto& c : e.children()) fs.push_back(go(c));
            return mul(std::move(fs));
        }
        case Kind::Add: {
            std::vector<Expr> ts;
            for (const auto& c : e.children()) ts.push_back(go(c));
            return add(std::move(ts));
        }
        default: return e;
        }
    }
};

}  // namespace

Expr replace_nodes(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& f) {
    std::unordered_map<const Node*, Expr> memo;
    std::function<Expr(const Expr&)> go = [&](const Expr& n) -> Expr {
        auto it = memo.find(n.get());
        if (it != memo.end()) return it->second;
        Expr r;
        if (auto rep = f(n)) {
            r = *rep;
        } else {
            switch (n.kind()) {
            case Kind::Fn: {
                std::vector<Expr> args;
                for (const auto& a : n.children()) args.push_back(go(a));
                r = fn(n.function(), n.orders(), std::move(args));
                break;
            }
            case Kind::Log: r = log(go(n.arg())); break;
            case Kind::Exp: r = exp(go(n.arg())); break;
            case Kind::Pow: r = pow(go(n.base()), n.exponent()); break;
            case Kind::Mul:
            case Kind::Add: {
                std::vector<Expr> ch;
                for (const auto& c : n.children()) ch.push_back(go(c));
                r = n.is(Kind::Mul) ? mul(std::move(ch)) : add(std::move(ch));
                break;
            }
            default: r = n;
            }
        }
        memo.emplace(n.get(), r);
        return r;
    };
    return go(e);
}

Expr simplify(const Expr& e) {
    static const Bindings empty;
    Rebuilder r{empty, {}, {}, {}};
    return r.go(e);
}

Expr substitute(const Expr& e, const Bindings& b, SubstitutionReport* report) {
    for (const auto& [name, fb] : b.functions) {
        if (function_names(fb.body).count(name))
            throw CyclicBinding("binding for " + name + " refers to itself");
    }
    if (b.symbols.empty() && b.functions.empty()) return e;
    Rebuilder r{b, {}, {}, {}};
    Expr out = r.go(e);
    if (report) {
        for (const auto& [k, v] : b.symbols)
            if (!r.used.count(k)) report->unused.push_back(k);
        for (const auto& [k, v] : b.functions)
            if (!r.used.count(k)) report->unused.push_back(k);
    }
    return out;
}

Expr substitute(const Expr& e, const std::string& s, const Expr& by) {
    Bindings b;
    b.bind(s, by);
    return substitute(e, b);
}

// ---- denominators -----------------------------------------------------------

namespace {

void collect_denominators(const Expr& e, std::vector<Expr>& out, std::unordered_set<const Node*>& seen) {
    if (!seen.insert(e.get()).second) return;
    if (e.is(Kind::Pow) && e.exponent() < 0) {
        if (std::none_of(out.begin(), out.end(), [&](const Expr& d) { return d == e.base(); }))
            out.push_back(e.base());
    }
    for (const auto& c : e.children()) collect_denominators(c, out, seen);
}

std::vector<Expr> factors_of(const Expr& term) {
    if (term.is(Kind::Mul)) return term.children();
    return {term};
}

}  // namespace

std::vector<Expr> denominators(const Expr& e) {
    std::vector<Expr> out;
    std::unordered_set<const Node*> seen;
    collect_denominators(e, out, seen);
    return out;
}

Expr clear_denominators(const Expr& e) {
    Expr cur = e;
    for (int round = 0; round < 4; ++round) {
        std::map<Expr, Rational, ExprLess> need;
        auto ts = terms_of(cur);
        for (const auto& t : ts) {
            for (const auto& f : factors_of(t)) {
                if (f.is(Kind::Pow) && f.exponent() < 0) {
                    Rational m = -f.exponent();
                    auto it = need.find(f.base());
                    if (it == need.end()) need.emplace(f.base(), m);
                    else if (it->second < m) it->second = m;
                }
            }
        }
        if (need.empty()) break;
        std::vector<Expr> out;
        out.reserve(ts.size());
        for (const auto& t : ts) {
            std::vector<Expr> fs{t};
            for (const auto& [b, m] : need) {
                if (b.is(Kind::Add) && is_integer(m)) {
                    unsigned k = mp::numerator(m).convert_to<unsigned>();
                    for (unsigned i = 0; i < k; ++i) fs.push_back(b);
                } else {
                    fs.push_back(raw_pow(b, m));
                }
            }
            out.push_back(mul(std::move(fs)));
        }
        cur = add(std::move(out));
    }
    return cur;
}

// ---- printing -------------------------------------------------------------

std::string rational_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

void print(std::ostream& os, const Expr& e, int prec);

void print_factor(std::ostream& os, const Expr& f) {
    switch (f.kind()) {
    case Kind::Sym:
    case Kind::Fn:
    case Kind::Exp:
    case Kind::Log:
    case Kind::Pow: print(os, f, 1); break;
    case Kind::Num:
        if (f.value() >= 0 && is_integer(f.value())) os << rational_string(f.value());
        else os << '(' << rational_string(f.value()) << ')';
        break;
    default:
        os << '(';
        print(os, f, 0);
        os << ')';
    }
}

void print(std::ostream& os, const Expr& e, int prec) {
    switch (e.kind()) {
    case Kind::Num:
        if (prec > 0 && (e.value() < 0 || !is_integer(e.value()))) os << '(' << rational_string(e.value()) << ')';
        else os << rational_string(e.value());
        return;
    case Kind::Sym: os << e.name(); return;
    case Kind::Fn: {
        const auto& f = *e.function();
        os << f.name;
        bool any = std::any_of(e.orders().begin(), e.orders().end(), [](int o) { return o > 0; });
        if (any) {
            os << '_';
            for (std::size_t i = 0; i < f.params.size(); ++i)
                for (int k = 0; k < e.orders()[i]; ++k) os << f.params[i];
        }
        os << '(';
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            if (i) os << ", ";
            print(os, e.children()[i], 0);
        }
        os << ')';
        return;
    }
    case Kind::Log:
    case Kind::Exp:
        os << (e.is(Kind::Exp) ? "exp(" : "log(");
        print(os, e.arg(), 0);
        os << ')';
        return;
    case Kind::Pow: {
        const Expr& b = e.base();
        bool atomic = b.is(Kind::Sym) || b.is(Kind::Fn) || b.is(Kind::Exp) || b.is(Kind::Log) ||
                      (b.is_num() && b.value() >= 0 && is_integer(b.value()));
        if (atomic) print(os, b, 2);
        else {
            os << '(';
            print(os, b, 0);
            os << ')';
        }
        os << '^';
        if (e.exponent() >= 0 && is_integer(e.exponent())) os << rational_string(e.exponent());
        else os << '(' << rational_string(e.exponent()) << ')';
        return;
    }
    case Kind::Mul: {
        if (prec > 1) os << '(';
        auto [c, m] = split_coefficient(e);
        std::vector<Expr> fs = m.is(Kind::Mul) ? m.children() : std::vector<Expr>{m};
        bool first = true;
        if (c == -1) os << '-';
        else if (c != 1) {
            os << rational_string(c);
            first = false;
        }
        for (const auto& f : fs) {
            if (!first) os << '*';
            first = false;
            print_factor(os, f);
        }
        if (prec > 1) os << ')';
        return;
    }
    case Kind::Add: {
        if (prec > 0) os << '(';
        bool first = true;
        for (const auto& t : e.children()) {
            auto [c, m] = split_coefficient(t);
            if (first) {
                print(os, t, 0);
                first = false;
                continue;
            }
            if (c < 0) {
                os << " - ";
                print(os, make_term(-c, m), 0);
            } else {
                os << " + ";
                print(os, t, 0);
            }
        }
        if (prec > 0) os << ')';
        return;
    }
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

}  // namespace redop
