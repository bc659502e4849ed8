#include "redop/jet.hpp"

#include <algorithm>
#include <unordered_map>

namespace redop {

JetSpace::JetSpace(std::vector<std::string> independents, std::vector<std::string> dependents)
    : indep_(std::move(independents)), dep_(std::move(dependents)) {}

std::string JetSpace::jet_name(std::size_t dep, const std::vector<int>& alpha) const {
    std::string letters;
    for (std::size_t i = 0; i < indep_.size() && i < alpha.size(); ++i)
        for (int k = 0; k < alpha[i]; ++k) letters += indep_[i];
    if (letters.empty()) return dep_[dep];
    return dep_[dep] + "_" + letters;
}

Expr JetSpace::jet(std::size_t dep, const std::vector<int>& alpha) const { return sym(jet_name(dep, alpha)); }

Expr JetSpace::jet(const std::string& dep, const std::string& letters) const {
    auto d = std::find(dep_.begin(), dep_.end(), dep);
    if (d == dep_.end()) throw Error("unknown dependent variable " + dep);
    std::vector<int> alpha(indep_.size(), 0);
    for (char c : letters) {
        auto i = std::find(indep_.begin(), indep_.end(), std::string(1, c));
        if (i == indep_.end()) throw Error("unknown independent variable " + std::string(1, c));
        alpha[i - indep_.begin()] += 1;
    }
    return jet(static_cast<std::size_t>(d - dep_.begin()), alpha);
}

std::optional<std::pair<std::size_t, std::vector<int>>> JetSpace::parse_jet(const std::string& name) const {
    for (std::size_t d = 0; d < dep_.size(); ++d) {
        const std::string& dn = dep_[d];
        if (name == dn) return std::make_pair(d, std::vector<int>(indep_.size(), 0));
        if (name.size() > dn.size() + 1 && name.compare(0, dn.size(), dn) == 0 && name[dn.size()] == '_') {
            std::vector<int> alpha(indep_.size(), 0);
            std::size_t last = 0;
            bool ok = true;
            for (std::size_t k = dn.size() + 1; k < name.size(); ++k) {
                auto i = std::find(indep_.begin(), indep_.end(), std::string(1, name[k]));
                if (i == indep_.end()) {
                    ok = false;
                    break;
                }
                std::size_t idx = static_cast<std::size_t>(i - indep_.begin());
                if (idx < last) {
                    ok = false;
                    break;
                }
                last = idx;
                alpha[idx] += 1;
            }
            if (ok) return std::make_pair(d, alpha);
        }
    }
    return std::nullopt;
}

Expr JetSpace::total_derivative(const Expr& e, std::size_t i) const {
    std::vector<Expr> terms{diff(e, indep_[i])};
    for (const auto& s : free_symbols(e)) {
        auto j = parse_jet(s);
        if (!j) continue;
        Expr d = diff(e, s);
        if (d.is_zero()) continue;
        auto alpha = j->second;
        alpha[i] += 1;
        terms.push_back(jet(j->first, alpha) * d);
    }
    return add(std::move(terms));
}

Expr JetSpace::total_derivative(const Expr& e, const std::vector<int>& alpha) const {
    Expr r = e;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (int k = 0; k < alpha[i]; ++k) r = total_derivative(r, i);
    return r;
}

Expr JetSpace::to_jets(const Expr& e) const {
    return replace_nodes(e, [this](const Expr& n) -> std::optional<Expr> {
        if (!n.is(Kind::Fn)) return std::nullopt;
        const auto& f = *n.function();
        auto d = std::find(dep_.begin(), dep_.end(), f.name);
        if (d == dep_.end()) return std::nullopt;
        std::vector<int> alpha(indep_.size(), 0);
        for (std::size_t k = 0; k < f.params.size(); ++k) {
            if (!(n.children()[k] == sym(f.params[k])))
                throw SignatureMismatch("dependent " + f.name + " applied off its own coordinates");
            auto i = std::find(indep_.begin(), indep_.end(), f.params[k]);
            if (i == indep_.end()) {
                if (n.orders()[k] > 0) throw SignatureMismatch("derivative of " + f.name + " along a non-independent");
                continue;
            }
            alpha[i - indep_.begin()] += n.orders()[k];
        }
        return jet(static_cast<std::size_t>(d - dep_.begin()), alpha);
    });
}

Expr characteristic(const JetSpace& js, const VectorField& v, std::size_t dep) {
    std::vector<Expr> terms{v.phi[dep]};
    std::vector<int> alpha(js.independents().size(), 0);
    for (std::size_t i = 0; i < js.independents().size(); ++i) {
        if (v.xi[i].is_zero()) continue;
        auto a = alpha;
        a[i] = 1;
        terms.push_back(-(v.xi[i] * js.jet(dep, a)));
    }
    return add(std::move(terms));
}

Expr prolong_apply(const JetSpace& js, const VectorField& v, const Expr& F) {
    const auto& indep = js.independents();
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < indep.size(); ++i) {
        if (v.xi[i].is_zero()) continue;
        terms.push_back(v.xi[i] * diff(F, indep[i]));
    }
    std::vector<Expr> chars;
    for (std::size_t a = 0; a < js.dependents().size(); ++a) chars.push_back(characteristic(js, v, a));
    for (const auto& s : free_symbols(F)) {
        auto j = js.parse_jet(s);
        if (!j) continue;
        Expr dF = diff(F, s);
        if (dF.is_zero()) continue;
        auto [a, alpha] = *j;
        std::vector<Expr> coeff{js.total_derivative(chars[a], alpha)};
        for (std::size_t i = 0; i < indep.size(); ++i) {
            if (v.xi[i].is_zero()) continue;
            auto b = alpha;
            b[i] += 1;
            coeff.push_back(v.xi[i] * js.jet(a, b));
        }
        terms.push_back(add(std::move(coeff)) * dF);
    }
    return add(std::move(terms));
}

Expr reduce_by_rules(const JetSpace& js, const Expr& e, const std::vector<JetRule>& rules, int max_rounds) {
    Expr cur = e;
    for (int round = 0; round < max_rounds; ++round) {
        Bindings b;
        for (const auto& s : free_symbols(cur)) {
            auto j = js.parse_jet(s);
            if (!j) continue;
            for (const auto& r : rules) {
                if (r.dep != j->first) continue;
                if (j->second == r.alpha) {
                    b.bind(s, r.rhs);
                    break;
                }
                if (!r.extend) continue;
                bool above = true;
                std::vector<int> extra(r.alpha.size());
                for (std::size_t k = 0; k < r.alpha.size(); ++k) {
                    extra[k] = j->second[k] - r.alpha[k];
                    if (extra[k] < 0) above = false;
                }
                if (above) {
                    b.bind(s, js.total_derivative(r.rhs, extra));
                    break;
                }
            }
        }
        if (b.symbols.empty()) return cur;
        cur = substitute(cur, b);
    }
    for (const auto& s : free_symbols(cur)) {
        auto j = js.parse_jet(s);
        if (!j) continue;
        for (const auto& r : rules)
            if (r.dep == j->first && j->second == r.alpha)
                throw EliminationFailure("jet " + s + " could not be eliminated");
    }
    return cur;
}

}  // namespace redop
