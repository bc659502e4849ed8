// Python bindings for the main operations. Expressions cross the boundary as
// redop.Expr objects or as strings in the usual grammar.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "redop/construct.hpp"
#include "redop/detsys.hpp"
#include "redop/io.hpp"
#include "redop/parse.hpp"
#include "redop/pde.hpp"
#include "redop/selftest.hpp"
#include "redop/transfer.hpp"
#include "redop/transform.hpp"

namespace py = pybind11;
using namespace redop;

namespace {

// One parse context per module: functions declared by earlier calls stay
// visible, so "h(t)" means the same symbol everywhere.
ParseContext& context() {
    static ParseContext ctx;
    return ctx;
}

Expr to_expr(const py::handle& h) {
    if (py::isinstance<Expr>(h)) return h.cast<Expr>();
    if (py::isinstance<py::int_>(h)) return Expr(h.cast<long long>());
    if (py::isinstance<py::str>(h)) return parse(h.cast<std::string>(), context());
    throw py::type_error("expected redop.Expr, int or str");
}

py::dict verdict_dict(const ZeroVerdict& v) {
    py::dict d;
    d["kind"] = v.label();
    d["zero"] = v.is_zero();
    d["max_residual"] = v.max_residual;
    d["witness"] = v.witness;
    d["seed"] = v.seed;
    d["probes"] = v.probes;
    return d;
}

ProbeConfig config(std::uint64_t seed, const std::vector<Expr>& singular) {
    ProbeConfig c;
    c.seed = seed;
    c.singular = singular;
    return c;
}

ParabolicEquation make_equation(const py::object& A, const py::object& B, const py::object& C,
                                const std::vector<py::object>& singular) {
    ParabolicEquation eq{to_expr(A), to_expr(B), to_expr(C)};
    for (const auto& s : singular) eq.singular.push_back(to_expr(s));
    eq.validate();
    return eq;
}

ReductionOperator to_operator(const py::handle& h) {
    if (py::isinstance<ReductionOperator>(h)) return h.cast<ReductionOperator>();
    return parse_operator(h.cast<std::string>(), context());
}

}  // namespace

PYBIND11_MODULE(redop, m) {
    m.doc() = "Reduction operators of linear (1+1)-dimensional parabolic equations";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<SignatureMismatch>(m, "SignatureMismatch", base.ptr());
    py::register_exception<ConstructionError>(m, "ConstructionError", base.ptr());
    py::register_exception<NonInvertible>(m, "NonInvertible", base.ptr());
    py::register_exception<NonQuadrable>(m, "NonQuadrable", base.ptr());

    py::class_<Expr>(m, "Expr")
        .def(py::init([](const py::object& o) { return to_expr(o); }))
        .def("__str__", [](const Expr& e) { return to_string(e); })
        .def("__repr__", [](const Expr& e) { return "Expr('" + to_string(e) + "')"; })
        .def("__eq__", [](const Expr& a, const py::object& b) { return a == to_expr(b); })
        .def("__hash__", &Expr::hash)
        .def("__add__", [](const Expr& a, const py::object& b) { return a + to_expr(b); })
        .def("__radd__", [](const Expr& a, const py::object& b) { return to_expr(b) + a; })
        .def("__sub__", [](const Expr& a, const py::object& b) { return a - to_expr(b); })
        .def("__rsub__", [](const Expr& a, const py::object& b) { return to_expr(b) - a; })
        .def("__mul__", [](const Expr& a, const py::object& b) { return a * to_expr(b); })
        .def("__rmul__", [](const Expr& a, const py::object& b) { return to_expr(b) * a; })
        .def("__truediv__", [](const Expr& a, const py::object& b) { return a / to_expr(b); })
        .def("__neg__", [](const Expr& a) { return -a; })
        .def("diff", [](const Expr& e, const std::string& v, int n) { return diff(e, v, n); }, py::arg("var"),
             py::arg("n") = 1)
        .def("subs", [](const Expr& e, const std::string& s, const py::object& by) { return substitute(e, s, to_expr(by)); })
        .def("eval", [](const Expr& e, const std::map<std::string, double>& p) { return eval(e, p); })
        .def("is_zero", &Expr::is_zero)
        .def("free_symbols", [](const Expr& e) { return free_symbols(e); });

    m.def("parse", [](const std::string& s, const std::vector<std::string>& params) {
        for (const auto& p : params) context().declare_parameter(p);
        return parse(s, context());
    }, py::arg("text"), py::arg("params") = std::vector<std::string>{});
    m.def("declare", [](const std::string& decl) { parse_declaration(decl, context()); },
          "Declares a function, e.g. \"H: (t), H_t = h(t) + 1\".");
    m.def("equals_zero", [](const py::object& e, std::uint64_t seed, const std::vector<py::object>& singular) {
        std::vector<Expr> s;
        for (const auto& o : singular) s.push_back(to_expr(o));
        return verdict_dict(equals_zero(to_expr(e), config(seed, s)));
    }, py::arg("expr"), py::arg("seed") = 20240917, py::arg("singular") = std::vector<py::object>{});

    py::class_<ParabolicEquation>(m, "Equation")
        .def(py::init(&make_equation), py::arg("A") = py::int_(1), py::arg("B") = py::int_(0),
             py::arg("C") = py::int_(0), py::arg("singular") = std::vector<py::object>{})
        .def_static("heat", &ParabolicEquation::heat)
        .def_static("reduced", [](const py::object& V) { return ReducedEquation{to_expr(V)}.as_parabolic(); })
        .def_readonly("A", &ParabolicEquation::A)
        .def_readonly("B", &ParabolicEquation::B)
        .def_readonly("C", &ParabolicEquation::C)
        .def_readonly("singular", &ParabolicEquation::singular)
        .def("apply_L", [](const ParabolicEquation& eq, const py::object& u) { return apply_L(eq, to_expr(u)); })
        .def("__str__", &ParabolicEquation::to_string);

    py::class_<ReductionOperator>(m, "ReductionOperator")
        .def_static("parse", [](const std::string& s) { return parse_operator(s, context()); })
        .def_static("tau1", [](const py::object& a, const py::object& b, const py::object& c) {
            return ReductionOperator::tau1(to_expr(a), to_expr(b), to_expr(c));
        })
        .def_static("tau0", [](const py::object& e) { return ReductionOperator::tau0(to_expr(e)); })
        .def_property_readonly("form", [](const ReductionOperator& q) {
            return q.form == ReductionOperator::Form::Tau1 ? "Tau1" : "Tau0";
        })
        .def_readonly("g1", &ReductionOperator::g1)
        .def_readonly("g2", &ReductionOperator::g2)
        .def_readonly("g3", &ReductionOperator::g3)
        .def_readonly("eta", &ReductionOperator::eta)
        .def("apply", [](const ReductionOperator& q, const py::object& u) { return q.apply(to_expr(u)); })
        .def("__str__", &ReductionOperator::to_string);

    m.def("derive", [](const ParabolicEquation& eq, const std::string& system) {
        auto sys = system == "de1" ? derive_DE1(eq) : system == "de0" ? derive_DE0(eq) : throw Error("system must be de1 or de0");
        return sys.equations;
    }, py::arg("eq"), py::arg("system"));

    m.def("verify_operator", [](const ParabolicEquation& eq, const py::object& op, std::uint64_t seed) {
        auto q = to_operator(op);
        ProbeConfig cfg = with_singular(config(seed, {}), eq.singular);
        for (const auto& s : q.singular) cfg.singular.push_back(s);
        auto sys = q.form == ReductionOperator::Form::Tau1 ? derive_DE1(eq) : derive_DE0(eq);
        py::dict d;
        d["residual"] = verdict_dict(residual(sys, q, cfg).overall);
        d["criterion"] = verdict_dict(check_conditional_invariance(eq, q, cfg).verdict);
        return d;
    }, py::arg("eq"), py::arg("op"), py::arg("seed") = 20240917);

    m.def("operator_from_solutions", [](const ParabolicEquation& eq, const std::vector<py::object>& vs) {
        if (vs.size() < 2 || vs.size() > 3) throw Error("need two or three solutions");
        SolutionTuple tup{to_expr(vs[0]), to_expr(vs[1]), vs.size() == 3 ? to_expr(vs[2]) : Expr(0), eq};
        return operator_from_solutions(tup, with_singular({}, eq.singular));
    });
    m.def("cole_hopf_operator", [](const ParabolicEquation& eq, const py::object& v) {
        return cole_hopf_operator(eq, to_expr(v), with_singular({}, eq.singular));
    });
    m.def("eta_from_linear_family", [](const ParabolicEquation& eq, const py::object& p1, const py::object& p0) {
        return eta_from_linear_family(eq, to_expr(p1), to_expr(p0), with_singular({}, eq.singular));
    });
    m.def("wronskian", [](const std::vector<py::object>& fs, const std::string& var) {
        std::vector<Expr> es;
        for (const auto& f : fs) es.push_back(to_expr(f));
        return wronskian(es, var);
    }, py::arg("fs"), py::arg("var") = "x");
    m.def("darboux", [](const ParabolicEquation& eq, const std::vector<py::object>& seeds) {
        std::vector<Expr> es;
        for (const auto& s : seeds) es.push_back(to_expr(s));
        auto d = make_darboux(eq, es, with_singular({}, eq.singular));
        return py::make_tuple(darboux_transformed_equation(eq, d),
                              py::cpp_function([d](const py::object& u) { return darboux_apply(d, to_expr(u)); }));
    }, "Returns (transformed equation, callable mapping solutions).");

    m.def("push", [](const ParabolicEquation& eq, const py::object& T, const py::object& X, const py::object& U1,
                     const py::object& U0, const py::object& op) {
        PointTransformation p;
        p.T = to_expr(T);
        p.X = to_expr(X);
        p.U1 = to_expr(U1);
        p.U0 = to_expr(U0);
        ProbeConfig cfg = with_singular({}, eq.singular);
        py::object q = py::none();
        if (!op.is_none()) q = py::cast(push_operator(to_operator(op), p, cfg));
        return py::make_tuple(push_equation(eq, p, cfg), q);
    }, py::arg("eq"), py::arg("T") = "t", py::arg("X") = "x", py::arg("U1") = py::int_(1), py::arg("U0") = py::int_(0),
          py::arg("op") = py::none());

    m.def("gauge", [](const ParabolicEquation& eq) {
        auto g = gauge_to_reduced(eq);
        auto c = classify_lie(g.reduced);
        py::dict d;
        d["V"] = g.reduced.V;
        d["T"] = g.transform.T;
        d["X"] = g.transform.X;
        d["U1"] = g.transform.U1;
        d["case"] = c.label();
        std::vector<std::string> names;
        for (const auto& q : lie_catalog(c)) names.push_back(q.name);
        d["lie_operators"] = names;
        return d;
    });

    m.def("transfer_series", [](const py::object& h, int N, const std::string& kind, const py::object& kappa) {
        auto te = transfer_equation(to_expr(h));
        auto s = kind == "poly" ? polynomial_series(te, N) : gaussian_series(te, N, to_expr(kappa));
        py::dict d;
        d["u"] = s.u;
        d["coefficients"] = s.coefficients;
        d["equation"] = te.eq;
        return d;
    }, py::arg("h"), py::arg("N"), py::arg("kind") = "poly", py::arg("kappa") = "kappa_s");

    m.def("selftest", [](std::uint64_t seed) {
        auto rep = run_selftest({seed});
        py::dict d;
        d["machine"] = rep.machine();
        d["all_pass"] = rep.all_pass();
        py::list crit;
        for (const auto& c : summarize_criteria(rep)) crit.append(py::make_tuple(c.id, c.title, c.checks, c.failed));
        d["criteria"] = crit;
        return d;
    }, py::arg("seed") = 20240917);
}
