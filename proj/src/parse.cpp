#include "redop/parse.hpp"

#include <algorithm>
#include <cctype>

namespace redop {

bool is_coordinate(const std::string& name) { return name == "t" || name == "x" || name == "u"; }

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

class Parser {
public:
    Parser(std::string_view s, ParseContext& ctx) : s_(s), ctx_(ctx) {}

    Expr run() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    ParseContext& ctx_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+')) terms.push_back(term());
            else if (accept('-')) terms.push_back(-term());
            else break;
        }
        return add(std::move(terms));
    }

    Expr term() {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) acc = acc * unary();
            else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero()) throw ParseError("division by zero", at);
                acc = acc / d;
            } else break;
        }
        return acc;
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr b = primary();
        if (accept('^')) {
            std::size_t at = pos_;
            Expr q = unary();
            if (!q.is_num()) {
                if (b.is_zero()) throw ParseError("zero to a symbolic power", at);
                return pow(b, q);
            }
            try {
                return pow(b, q.value());
            } catch (const EvalError& e) {
                throw ParseError(e.what(), at);
            }
        }
        return b;
    }

    Expr number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        Rational v(std::string(s_.substr(start, pos_ - start)));
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            std::size_t fs = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string frac(s_.substr(fs, pos_ - fs));
            if (!frac.empty()) {
                boost::multiprecision::cpp_int den = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                                static_cast<unsigned>(frac.size()));
                v += Rational(boost::multiprecision::cpp_int(frac), den);
            }
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
            std::size_t es = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (es == pos_) {
                pos_ = save;
            } else {
                int k = std::stoi(std::string(s_.substr(es, pos_ - es)));
                Rational scale = boost::multiprecision::pow(boost::multiprecision::cpp_int(10), static_cast<unsigned>(k));
                v = neg ? v / scale : v * scale;
            }
        }
        return num(v);
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && ident_char(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    /// Splits name_suffix when the suffix names formal parameters of a known base.
    std::optional<std::pair<FunctionRef, std::vector<int>>> derivative_of(const std::string& name,
                                                                          const std::vector<Expr>* args) {
        auto us = name.rfind('_');
        if (us == std::string::npos || us == 0 || us + 1 == name.size()) return std::nullopt;
        std::string base = name.substr(0, us);
        std::string suffix = name.substr(us + 1);
        if (!std::all_of(suffix.begin(), suffix.end(), [](char c) { return c == 't' || c == 'x' || c == 'u'; }))
            return std::nullopt;
        FunctionRef f;
        auto it = ctx_.functions.find(base);
        if (it != ctx_.functions.end()) {
            f = it->second;
        } else if (args && ctx_.implicit_functions) {
            f = implicit(base, *args);
        }
        if (!f) return std::nullopt;
        std::vector<int> orders(f->params.size(), 0);
        for (char c : suffix) {
            auto p = std::find(f->params.begin(), f->params.end(), std::string(1, c));
            if (p == f->params.end()) fail("function " + base + " does not depend on " + std::string(1, c));
            orders[p - f->params.begin()] += 1;
        }
        return std::make_pair(f, orders);
    }

    FunctionRef implicit(const std::string& name, const std::vector<Expr>& args) {
        std::vector<std::string> params;
        for (const auto& a : args) {
            if (!a.is(Kind::Sym) || !is_coordinate(a.name())) return nullptr;
            if (std::find(params.begin(), params.end(), a.name()) != params.end()) return nullptr;
            params.push_back(a.name());
        }
        auto f = make_function(name, params);
        ctx_.functions[name] = f;
        return f;
    }

    Expr apply(const FunctionRef& f, std::vector<int> orders, std::vector<Expr> args, std::size_t at) {
        if (args.size() != f->params.size())
            throw ParseError("function " + f->name + " takes " + std::to_string(f->params.size()) + " arguments", at);
        return fn(f, std::move(orders), std::move(args));
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        unsigned char c = static_cast<unsigned char>(s_[pos_]);
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(c) || c == '.') return number();
        if (!ident_start(c)) fail(std::string("unexpected '") + s_[pos_] + "'");
        std::size_t at = pos_;
        std::string name = identifier();
        skip();
        if (pos_ < s_.size() && s_[pos_] == '[')
            fail("derivative operators are not part of the grammar; use a suffix such as " + std::string("f_x"));
        bool call = pos_ < s_.size() && s_[pos_] == '(';
        if (call) {
            ++pos_;
            std::vector<Expr> args;
            skip();
            if (!accept(')')) {
                args.push_back(expr());
                while (accept(',')) args.push_back(expr());
                expect(')');
            }
            if (name == "exp" || name == "log") {
                if (args.size() != 1) throw ParseError(name + " takes one argument", at);
                if (name == "exp") return exp(args[0]);
                try {
                    return log(args[0]);
                } catch (const EvalError& e) {
                    throw ParseError(e.what(), at);
                }
            }
            auto it = ctx_.functions.find(name);
            if (it != ctx_.functions.end())
                return apply(it->second, std::vector<int>(it->second->params.size(), 0), std::move(args), at);
            if (auto d = derivative_of(name, &args)) return apply(d->first, d->second, std::move(args), at);
            if (ctx_.implicit_functions) {
                if (auto f = implicit(name, args))
                    return apply(f, std::vector<int>(f->params.size(), 0), std::move(args), at);
            }
            throw ParseError("undeclared function '" + name + "'", at);
        }
        if (is_coordinate(name)) return sym(name);
        if (ctx_.operator_symbols && (name == "dt" || name == "dx" || name == "du")) return sym("@" + name);
        if (ctx_.parameters.count(name)) return sym(name);
        auto it = ctx_.functions.find(name);
        if (it != ctx_.functions.end()) return fn(it->second);
        if (auto d = derivative_of(name, nullptr)) {
            std::vector<Expr> args;
            for (const auto& p : d->first->params) args.push_back(sym(p));
            return fn(d->first, d->second, std::move(args));
        }
        throw ParseError("unknown symbol '" + name + "'", at);
    }
};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace

Expr parse(std::string_view text, ParseContext& ctx) {
    Parser p(text, ctx);
    return p.run();
}

Expr parse(std::string_view text) {
    ParseContext ctx;
    return parse(text, ctx);
}

FunctionRef parse_declaration(std::string_view text, ParseContext& ctx) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("declaration needs ':'", 0);
    std::string name = trim(text.substr(0, colon));
    if (name.empty()) throw ParseError("missing function name", 0);
    auto open = text.find('(', colon);
    auto close = text.find(')', colon);
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw ParseError("declaration needs a parameter tuple", colon);
    std::vector<std::string> params;
    std::string inside(text.substr(open + 1, close - open - 1));
    std::size_t start = 0;
    while (start <= inside.size()) {
        auto comma = inside.find(',', start);
        std::string p = trim(std::string_view(inside).substr(start, comma == std::string::npos ? std::string::npos
                                                                                               : comma - start));
        if (!p.empty()) {
            if (!is_coordinate(p)) throw ParseError("parameter '" + p + "' is not a coordinate", open);
            params.push_back(p);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    std::vector<std::optional<Expr>> rules(params.size());
    // optional rules after the tuple: ", name_v = expr" separated by top-level commas
    std::string rest = trim(text.substr(close + 1));
    while (!rest.empty()) {
        if (rest.front() != ',') throw ParseError("expected ',' before derivative rule", close + 1);
        rest = trim(std::string_view(rest).substr(1));
        auto eq = rest.find('=');
        if (eq == std::string::npos) throw ParseError("derivative rule needs '='", close + 1);
        std::string lhs = trim(std::string_view(rest).substr(0, eq));
        if (lhs.size() != name.size() + 2 || lhs.compare(0, name.size(), name) != 0 || lhs[name.size()] != '_')
            throw ParseError("rule '" + lhs + "' must have the form " + name + "_<var>", close + 1);
        std::string v(1, lhs.back());
        auto p = std::find(params.begin(), params.end(), v);
        if (p == params.end()) throw ParseError(name + " does not depend on " + v, close + 1);
        // the rule extends to the next top-level comma
        int depth = 0;
        std::size_t end = eq + 1;
        for (; end < rest.size(); ++end) {
            if (rest[end] == '(') ++depth;
            else if (rest[end] == ')') --depth;
            else if (rest[end] == ',' && depth == 0) break;
        }
        rules[p - params.begin()] = parse(std::string_view(rest).substr(eq + 1, end - eq - 1), ctx);
        rest = trim(std::string_view(rest).substr(end));
    }
    auto f = make_function(name, params, std::move(rules));
    ctx.functions[name] = f;
    return f;
}

}  // namespace redop
