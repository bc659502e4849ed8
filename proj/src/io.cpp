#include "redop/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace redop {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

const Expr* find_entry(const Block& b, const std::string& key, std::vector<Expr>& store, ParseContext& ctx) {
    for (const auto& [k, v] : b.entries)
        if (k == key) {
            store.push_back(parse(v, ctx));
            return &store.back();
        }
    return nullptr;
}

struct LinearForm {
    Expr dt, dx, du;
};

LinearForm operator_coefficients(std::string_view text, ParseContext& ctx) {
    bool saved = ctx.operator_symbols;
    ctx.operator_symbols = true;
    Expr e;
    try {
        e = parse(text, ctx);
    } catch (...) {
        ctx.operator_symbols = saved;
        throw;
    }
    ctx.operator_symbols = saved;
    LinearForm f{diff(e, "@dt"), diff(e, "@dx"), diff(e, "@du")};
    for (const auto* c : {&f.dt, &f.dx, &f.du})
        for (const auto& s : free_symbols(*c))
            if (!s.empty() && s[0] == '@') throw ParseError("operator must be linear in dt, dx, du", 0);
    Expr rest = e - f.dt * sym("@dt") - f.dx * sym("@dx") - f.du * sym("@du");
    if (!rest.is_zero()) throw ParseError("operator has terms without dt, dx or du: " + to_string(rest), 0);
    return f;
}

}  // namespace

Block read_block(std::istream& in, ParseContext& ctx) {
    Block b;
    std::string line;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        std::size_t line_offset = offset;
        offset += line.size() + 1;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::string s = trim(line);
        if (s.empty()) continue;
        if (s.rfind("param", 0) == 0 && s.size() > 5 && std::isspace(static_cast<unsigned char>(s[5]))) {
            std::stringstream names(s.substr(6));
            std::string n;
            while (std::getline(names, n, ',')) {
                n = trim(n);
                if (!is_identifier(n)) throw ParseError("bad parameter name '" + n + "'", line_offset);
                ctx.declare_parameter(n);
            }
            continue;
        }
        auto colon = s.find(':');
        auto eq = s.find('=');
        if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
            std::string head = trim(s.substr(0, colon));
            if (head == "singular") {
                b.singular.push_back(parse(trim(s.substr(colon + 1)), ctx));
            } else {
                parse_declaration(s, ctx);
            }
            continue;
        }
        if (eq == std::string::npos) throw ParseError("expected KEY = expression", line_offset);
        std::string key = trim(s.substr(0, eq));
        if (!is_identifier(key)) throw ParseError("bad key '" + key + "'", line_offset);
        b.entries.emplace_back(key, trim(s.substr(eq + 1)));
    }
    return b;
}

Block read_block_file(const std::string& path, ParseContext& ctx) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return read_block(in, ctx);
}

EquationInput equation_from_block(const Block& b, ParseContext& ctx) {
    for (const auto& [k, v] : b.entries)
        if (k != "A" && k != "B" && k != "C" && k != "V") throw ParseError("unknown equation key " + k, 0);
    std::vector<Expr> store;
    store.reserve(4);
    EquationInput r;
    if (const Expr* V = find_entry(b, "V", store, ctx)) {
        for (const auto& [k, v] : b.entries)
            if (k != "V") throw ParseError("V cannot be combined with A, B, C", 0);
        r.reduced = true;
        r.eq = ReducedEquation{*V}.as_parabolic();
    } else {
        if (const Expr* A = find_entry(b, "A", store, ctx)) r.eq.A = *A;
        if (const Expr* B = find_entry(b, "B", store, ctx)) r.eq.B = *B;
        if (const Expr* C = find_entry(b, "C", store, ctx)) r.eq.C = *C;
    }
    r.eq.singular = b.singular;
    r.eq.validate();
    return r;
}

EquationInput read_equation_file(const std::string& path, ParseContext& ctx) {
    return equation_from_block(read_block_file(path, ctx), ctx);
}

PointTransformation transformation_from_block(const Block& b, ParseContext& ctx) {
    PointTransformation p;
    std::vector<Expr> store;
    store.reserve(6);
    for (const auto& [k, v] : b.entries)
        if (k != "T" && k != "X" && k != "U1" && k != "U0" && k != "Tinv" && k != "Xinv")
            throw ParseError("unknown transformation key " + k, 0);
    if (const Expr* e = find_entry(b, "T", store, ctx)) p.T = *e;
    if (const Expr* e = find_entry(b, "X", store, ctx)) p.X = *e;
    if (const Expr* e = find_entry(b, "U1", store, ctx)) p.U1 = *e;
    if (const Expr* e = find_entry(b, "U0", store, ctx)) p.U0 = *e;
    if (const Expr* e = find_entry(b, "Tinv", store, ctx)) p.Tinv = *e;
    if (const Expr* e = find_entry(b, "Xinv", store, ctx)) p.Xinv = *e;
    return p;
}

PointTransformation read_transformation_file(const std::string& path, ParseContext& ctx) {
    return transformation_from_block(read_block_file(path, ctx), ctx);
}

ReductionOperator parse_operator(std::string_view text, ParseContext& ctx, const ProbeConfig& cfg) {
    auto f = operator_coefficients(text, ctx);
    return ReductionOperator::from_general(f.dt, f.dx, f.du, cfg);
}

InfinitesimalOperator parse_infinitesimal(std::string_view text, ParseContext& ctx) {
    auto f = operator_coefficients(text, ctx);
    InfinitesimalOperator q;
    q.tau = f.dt;
    q.xi = f.dx;
    q.zeta1 = diff(f.du, "u");
    q.zeta0 = f.du - q.zeta1 * sym("u");
    if (depends_on(q.zeta1, "u")) throw SignatureMismatch("du coefficient must be affine in u");
    q.validate();
    return q;
}

std::vector<Expr> parse_list(std::string_view text, ParseContext& ctx) {
    std::vector<Expr> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        std::string piece = trim(text.substr(start, end - start));
        if (piece.empty()) throw ParseError("empty list item", start);
        out.push_back(parse(piece, ctx));
        start = end + 1;
    }
    return out;
}

std::string operator_machine(const ReductionOperator& q) {
    std::ostringstream os;
    if (q.form == ReductionOperator::Form::Tau1) {
        os << "form\tTau1\ng1\t" << q.g1 << "\ng2\t" << q.g2 << "\ng3\t" << q.g3 << "\n";
    } else {
        os << "form\tTau0\neta\t" << q.eta << "\n";
    }
    return os.str();
}

}  // namespace redop
