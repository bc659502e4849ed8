// redop: derive, build, transform and verify reduction operators of
// u_t = A u_xx + B u_x + C u.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "redop/construct.hpp"
#include "redop/detsys.hpp"
#include "redop/io.hpp"
#include "redop/pde.hpp"
#include "redop/selftest.hpp"
#include "redop/transfer.hpp"
#include "redop/transform.hpp"
#include "redop/verify.hpp"

using namespace redop;

namespace {

struct Common {
    std::uint64_t seed = 20240917;
    double tol = 1e-8;
    int points = 25;
    std::string format = "text";
    std::string params;
};

struct Job {
    std::string eq_file;
    std::string system = "auto";
    std::string solutions;
    std::string psi;
    std::string cole_hopf;
    std::string family;
    std::string family_param = "kappa";
    std::string inverse;
    std::string transform_file;
    std::string op;
    std::string h;
    std::string series = "poly";
    int N = 1;
    std::string kappa = "0";
    std::string seeds;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

ProbeConfig probe_config(const Common& c) {
    ProbeConfig cfg;
    cfg.seed = c.seed;
    cfg.tolerance = c.tol;
    cfg.points = c.points;
    return cfg;
}

ParseContext parse_context(const Common& c) {
    ParseContext ctx;
    std::stringstream ss(c.params);
    std::string p;
    while (std::getline(ss, p, ',')) {
        auto a = p.find_first_not_of(" \t");
        auto b = p.find_last_not_of(" \t");
        if (a != std::string::npos) ctx.declare_parameter(p.substr(a, b - a + 1));
    }
    return ctx;
}

ParabolicEquation load_equation(const Job& j, ParseContext& ctx) {
    if (j.eq_file.empty()) throw UsageError("--eq FILE is required");
    return read_equation_file(j.eq_file, ctx).eq;
}

bool want_de1(const Job& j, const ReductionOperator* q) {
    if (j.system == "de1") return true;
    if (j.system == "de0") return false;
    if (j.system != "auto") throw UsageError("--system must be de1 or de0");
    if (!q) throw UsageError("--system de1|de0 is required here");
    return q->form == ReductionOperator::Form::Tau1;
}

void emit(const Common& c, const VerificationReport& rep) {
    std::cout << (c.format == "machine" ? rep.machine() : rep.text());
}

void print_operator(const Common& c, const ReductionOperator& q) {
    if (c.format == "machine") {
        std::cout << operator_machine(q);
    } else {
        std::cout << "Q = " << q.to_string() << "\n";
    }
}

void print_equation(const Common& c, const ParabolicEquation& eq, const std::string& label) {
    if (c.format == "machine") {
        std::cout << label << ".A\t" << eq.A << "\n" << label << ".B\t" << eq.B << "\n" << label << ".C\t" << eq.C << "\n";
    } else {
        std::cout << label << ":\n  A = " << eq.A << "\n  B = " << eq.B << "\n  C = " << eq.C << "\n";
    }
}

// Residual of the determining system plus the direct criterion for q.
VerificationReport operator_checks(const ParabolicEquation& eq, const ReductionOperator& q, const ProbeConfig& cfg,
                                   const std::string& prefix) {
    VerificationReport rep;
    bool tau1 = q.form == ReductionOperator::Form::Tau1;
    auto sys = tau1 ? derive_DE1(eq) : derive_DE0(eq);
    auto r = residual(sys, q, cfg);
    for (std::size_t i = 0; i < r.verdicts.size(); ++i)
        rep.add(verdict_check(prefix + (tau1 ? "DE1[" : "DE0[") + std::to_string(i + 1) + "]", r.verdicts[i]));
    rep.add(verdict_check(prefix + "conditional-invariance", check_conditional_invariance(eq, q, cfg).verdict));
    return rep;
}

int cmd_derive(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    auto eq = load_equation(j, ctx);
    auto sys = want_de1(j, nullptr) ? derive_DE1(eq) : derive_DE0(eq);
    int k = 1;
    for (const auto& e : sys.equations) {
        if (c.format == "machine") std::cout << "equation\t" << k++ << "\t" << e << "\n";
        else std::cout << e << " = 0\n";
    }
    return 0;
}

int cmd_verify_op(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    auto eq = load_equation(j, ctx);
    if (j.op.empty()) throw UsageError("--op is required");
    auto cfg = probe_config(c);
    auto q = parse_operator(j.op, ctx, cfg);
    if (want_de1(j, &q) != (q.form == ReductionOperator::Form::Tau1))
        throw UsageError("operator form does not match --system");
    print_operator(c, q);
    auto rep = operator_checks(eq, q, cfg, "");
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_build_op(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    auto eq = load_equation(j, ctx);
    auto cfg = probe_config(c);
    int given = !j.solutions.empty() + !j.psi.empty() + !j.cole_hopf.empty() + !j.family.empty();
    if (given != 1) throw UsageError("give exactly one of --solutions, --psi, --cole-hopf, --family");
    ReductionOperator q;
    if (!j.solutions.empty()) {
        auto v = parse_list(j.solutions, ctx);
        if (v.size() == 2) v.push_back(Expr(0));
        if (v.size() != 3) throw UsageError("--solutions takes \"v1; v2; v3\"");
        q = operator_from_solutions(SolutionTuple{v[0], v[1], v[2], eq}, cfg);
    } else if (!j.psi.empty()) {
        auto v = parse_list(j.psi, ctx);
        if (v.size() == 1) v.push_back(Expr(0));
        if (v.size() != 2) throw UsageError("--psi takes \"Psi1; Psi0\"");
        q = eta_from_linear_family(eq, v[0], v[1], cfg);
    } else if (!j.cole_hopf.empty()) {
        q = cole_hopf_operator(eq, parse(j.cole_hopf, ctx), cfg);
    } else {
        if (j.inverse.empty()) throw UsageError("--family needs --inverse");
        ctx.declare_parameter(j.family_param);
        SolutionFamily fam{parse(j.family, ctx), {j.family_param}, eq};
        q = eta_from_general_family(fam, parse(j.inverse, ctx), cfg);
    }
    print_operator(c, q);
    auto rep = operator_checks(eq, q, with_singular(cfg, eq.singular), "");
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_push(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    auto eq = load_equation(j, ctx);
    if (j.transform_file.empty()) throw UsageError("--transform FILE is required");
    auto tr = read_transformation_file(j.transform_file, ctx);
    auto cfg = probe_config(c);
    auto target = push_equation(eq, tr, cfg);
    print_equation(c, target, "pushed");
    VerificationReport rep;
    if (!j.op.empty()) {
        auto q = parse_operator(j.op, ctx, cfg);
        auto src = operator_checks(eq, q, with_singular(cfg, eq.singular), "source/");
        auto pq = push_operator(q, tr, cfg);
        print_operator(c, pq);
        rep.merge(src);
        rep.merge(operator_checks(target, pq, with_singular(cfg, target.singular), "pushed/"));
    }
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_induce(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    if (j.op.empty()) throw UsageError("--op is required");
    auto q = parse_infinitesimal(j.op, ctx);
    bool de1 = want_de1(j, nullptr);
    auto induced = de1 ? induce_on_DE1(q) : induce_on_DE0(q);
    std::cout << induced.to_string() << "\n";
    VerificationReport rep;
    if (!j.eq_file.empty()) {
        auto eq = load_equation(j, ctx);
        auto cfg = with_singular(probe_config(c), eq.singular);
        rep.add(verdict_check("lie-symmetry", check_lie_symmetry(eq, q, cfg)));
        auto sys = de1 ? derive_DE1(eq) : derive_DE0(eq);
        rep.add(verdict_check(de1 ? "DE1-symmetry" : "DE0-symmetry", check_system_symmetry(sys, induced, cfg)));
    }
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_darboux(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    auto eq = load_equation(j, ctx);
    if (j.seeds.empty()) throw UsageError("--seeds is required");
    auto cfg = probe_config(c);
    auto dop = make_darboux(eq, parse_list(j.seeds, ctx), cfg);
    auto target = darboux_transformed_equation(eq, dop);
    print_equation(c, target, "transformed");
    VerificationReport rep;
    if (!j.solutions.empty()) {
        ProbeConfig tc = with_singular(cfg, target.singular);
        int k = 1;
        for (const auto& s : parse_list(j.solutions, ctx)) {
            Expr img = darboux_apply(dop, s);
            if (c.format != "machine") std::cout << "DT(" << s << ") = " << img << "\n";
            rep.add(verdict_check("intertwining[" + std::to_string(k++) + "]", equals_zero(apply_L(target, img), tc)));
        }
    }
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_transfer(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    if (j.h.empty()) throw UsageError("--h is required");
    if (j.N < 0) throw UsageError("--N must be non-negative");
    auto te = transfer_equation(parse(j.h, ctx));
    Expr kappa = parse(j.kappa, ctx);
    auto cfg = with_singular(probe_config(c), {sym("x")});
    SeriesSolution s;
    if (j.series == "poly") {
        s = polynomial_series(te, j.N);
    } else if (j.series == "gauss") {
        s = gaussian_series(te, j.N, kappa);
        cfg = with_singular(cfg, {2 * sym("t") + kappa});
    } else {
        throw UsageError("--series must be poly or gauss");
    }
    if (c.format == "machine") {
        std::cout << "u\t" << s.u << "\n";
        for (int k = 0; k <= s.N; ++k) std::cout << "coefficient\t" << k << "\t" << s.coefficients[k] << "\n";
    } else {
        std::cout << "u = " << s.u << "\n";
        for (int k = 0; k <= s.N; ++k) std::cout << "  coefficient " << k << " = " << s.coefficients[k] << "\n";
    }
    VerificationReport rep;
    rep.add(verdict_check("residual", equals_zero(apply_L(te.eq, s.u), cfg)));
    auto rec = series_recurrence_residuals(te, s);
    for (std::size_t k = 0; k < rec.size(); ++k)
        rep.add(verdict_check("recurrence[" + std::to_string(k) + "]", equals_zero(rec[k], cfg)));
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_catalog(const Common& c, const Job& j) {
    ParseContext ctx = parse_context(c);
    auto eq = load_equation(j, ctx);
    auto cfg = probe_config(c);
    auto g = gauge_to_reduced(eq, {}, with_singular(cfg, eq.singular));
    auto lc = classify_lie(g.reduced, cfg);
    ParabolicEquation red = g.reduced.as_parabolic();
    red.singular = {sym("x")};
    if (c.format == "machine") {
        std::cout << "V\t" << g.reduced.V << "\ncase\t" << lc.label() << "\n";
    } else {
        std::cout << "gauge:\n" << g.transform.to_string() << "\nV = " << g.reduced.V << "\ncase: " << lc.label() << "\n";
    }
    VerificationReport rep;
    for (const auto& q : lie_catalog(lc)) {
        if (c.format != "machine") std::cout << "  " << q.to_string() << "\n";
        rep.add(verdict_check("lie/" + q.name, check_lie_symmetry(red, q, cfg)));
    }
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

int cmd_selftest(const Common& c) {
    auto rep = run_selftest(SelftestOptions{c.seed});
    emit(c, rep);
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduction operators of linear parabolic equations"};
    app.require_subcommand(1);
    Common common;
    Job job;
    app.add_option("--seed", common.seed, "probe seed")->capture_default_str();
    app.add_option("--tol", common.tol, "zero-test tolerance")->capture_default_str();
    app.add_option("--points", common.points, "probe points")->capture_default_str();
    app.add_option("--format", common.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    app.add_option("--params", common.params, "comma-separated parameter names for inline expressions");

    auto eq_opt = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--eq", job.eq_file, "equation file")->check(CLI::ExistingFile);
        if (required) o->required();
    };
    auto sys_opt = [&](CLI::App* s) {
        s->add_option("--system", job.system, "de1 or de0")->check(CLI::IsMember({"de1", "de0", "auto"}));
    };

    auto* derive = app.add_subcommand("derive", "print a determining system");
    eq_opt(derive, true);
    derive->add_option("--system", job.system, "de1 or de0")->required()->check(CLI::IsMember({"de1", "de0"}));

    auto* verify_op = app.add_subcommand("verify-op", "check a reduction operator");
    eq_opt(verify_op, true);
    sys_opt(verify_op);
    verify_op->add_option("--op", job.op, "operator, e.g. \"dt - dx/x\"")->required();

    auto* build_op = app.add_subcommand("build-op", "construct an operator from solutions");
    eq_opt(build_op, true);
    build_op->add_option("--solutions", job.solutions, "\"v1; v2; v3\"");
    build_op->add_option("--psi", job.psi, "\"Psi1; Psi0\"");
    build_op->add_option("--cole-hopf", job.cole_hopf, "solution v");
    build_op->add_option("--family", job.family, "one-parameter family f(t,x,kappa)");
    build_op->add_option("--param", job.family_param, "family parameter name")->capture_default_str();
    build_op->add_option("--inverse", job.inverse, "Phi(t,x,u) with Phi(t,x,f) = kappa");

    auto* push = app.add_subcommand("push", "apply a point transformation");
    eq_opt(push, true);
    push->add_option("--transform", job.transform_file, "transformation file")->required()->check(CLI::ExistingFile);
    push->add_option("--op", job.op, "operator to push");

    auto* induce = app.add_subcommand("induce", "induce a Lie symmetry on a determining system");
    eq_opt(induce, false);
    induce->add_option("--system", job.system, "de1 or de0")->required()->check(CLI::IsMember({"de1", "de0"}));
    induce->add_option("--op", job.op, "tau*dt + xi*dx + (zeta1*u + zeta0)*du")->required();

    auto* darboux = app.add_subcommand("darboux", "Darboux transformation");
    eq_opt(darboux, true);
    darboux->add_option("--seeds", job.seeds, "\"psi1; psi2; ...\"")->required();
    darboux->add_option("--solutions", job.solutions, "solutions to map");

    auto* transfer = app.add_subcommand("transfer", "series solutions of u_t = u_xx + h/x u_x");
    transfer->set_help_flag("--help", "print this help message and exit");
    transfer->add_option("--h", job.h, "h(t)")->required();
    transfer->add_option("--series", job.series, "poly or gauss")->check(CLI::IsMember({"poly", "gauss"}));
    transfer->add_option("--N", job.N, "series order")->capture_default_str();
    transfer->add_option("--kappa", job.kappa, "Gaussian shift")->capture_default_str();

    auto* catalog = app.add_subcommand("catalog", "gauge, classify and list Lie symmetries");
    eq_opt(catalog, true);

    auto* selftest = app.add_subcommand("selftest", "run the fixture suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (derive->parsed()) return cmd_derive(common, job);
        if (verify_op->parsed()) return cmd_verify_op(common, job);
        if (build_op->parsed()) return cmd_build_op(common, job);
        if (push->parsed()) return cmd_push(common, job);
        if (induce->parsed()) return cmd_induce(common, job);
        if (darboux->parsed()) return cmd_darboux(common, job);
        if (transfer->parsed()) return cmd_transfer(common, job);
        if (catalog->parsed()) return cmd_catalog(common, job);
        if (selftest->parsed()) return cmd_selftest(common);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
