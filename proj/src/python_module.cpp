#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bergman/csv.hpp"
#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"
#include "bergman/experiments.hpp"
#include "bergman/operators.hpp"
#include "bergman/schur.hpp"
#include "bergman/weights.hpp"
#include "cli.hpp"

namespace py = pybind11;
using namespace bergman;

namespace {

QuadratureConfig make_qc(double tolerance) {
    QuadratureConfig qc;
    qc.tolerance = tolerance;
    qc.validate();
    return qc;
}

SymbolicFunction as_function(const py::object& f) {
    if (py::isinstance<py::str>(f)) return SymbolicFunction::parse(f.cast<std::string>());
    return f.cast<SymbolicFunction>();
}

OperatorSpec operator_by_name(const std::string& name, double alpha, double a, double b) {
    OperatorSpec op;
    if (name == "bergman") op = OperatorSpec::positive_bergman(alpha);
    else if (name == "s") op = OperatorSpec::fractional_s(alpha, a);
    else if (name == "t") op = OperatorSpec::fractional_t(alpha, a);
    else if (name == "tplus") op = OperatorSpec::general_t_plus(a, b);
    else throw InputError("operator must be bergman, s, t or tplus, got '" + name + "'");
    op.validate();
    return op;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted Bergman-type operators on the upper half-plane";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", error.ptr());
    py::register_exception<ToleranceError>(m, "ToleranceError", error.ptr());
    py::register_exception<DegenerateAverageError>(m, "DegenerateAverageError", error.ptr());
    py::register_exception<WeightNotInClassError>(m, "WeightNotInClassError", error.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());

    py::class_<HalfPlanePoint>(m, "Point")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_property_readonly("x", &HalfPlanePoint::x)
        .def_property_readonly("y", &HalfPlanePoint::y)
        .def("__repr__", [](const HalfPlanePoint& z) {
            std::ostringstream s;
            s << "Point(" << z.x() << ", " << z.y() << ")";
            return s.str();
        });

    py::class_<SymbolicFunction>(m, "Function")
        .def_static("parse", &SymbolicFunction::parse, py::arg("text"))
        .def("serialize", &SymbolicFunction::serialize)
        .def("__str__", &SymbolicFunction::serialize)
        .def("__mul__", [](const SymbolicFunction& a, const SymbolicFunction& b) { return a * b; });

    py::class_<ExponentConfig>(m, "Exponents")
        .def(py::init([](double p, double q, double alpha, double a, bool balanced) {
                 ExponentConfig c{p, q, alpha, a, balanced};
                 c.validate();
                 return c;
             }),
             py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("alpha") = 0.0, py::arg("a") = 0.0,
             py::arg("balanced") = false)
        .def_static("balanced_from", &ExponentConfig::make_balanced, py::arg("p"), py::arg("alpha"), py::arg("a"))
        .def_readonly("p", &ExponentConfig::p)
        .def_readonly("q", &ExponentConfig::q)
        .def_readonly("alpha", &ExponentConfig::alpha)
        .def_readonly("a", &ExponentConfig::a);

    m.def(
        "apply",
        [](const std::string& op, const py::object& f, double x, double y, double alpha, double a, double b,
           double tol) {
            return apply(operator_by_name(op, alpha, a, b), as_function(f), HalfPlanePoint(x, y), make_qc(tol))
                .value();
        },
        py::arg("op"), py::arg("f"), py::arg("x"), py::arg("y"), py::arg("alpha") = 0.0, py::arg("a") = 0.0,
        py::arg("b") = 1.0, py::arg("tol") = 1e-8, "Operator value (op f)(x + iy).");

    m.def(
        "norm_ratio",
        [](const std::string& op, const py::object& f, const ExponentConfig& cfg, double b, double source_order,
           double target_order, double tol) {
            NormSpaces spaces;
            spaces.source_order = source_order;
            spaces.target_order = target_order;
            const NormRatio r =
                norm_ratio(operator_by_name(op, cfg.alpha, cfg.a, b), as_function(f), cfg, spaces, make_qc(tol));
            return py::dict(py::arg("source") = r.source, py::arg("target") = r.target, py::arg("ratio") = r.ratio,
                            py::arg("converged") = r.converged);
        },
        py::arg("op"), py::arg("f"), py::arg("cfg"), py::arg("b") = 1.0, py::arg("source_order") = 0.0,
        py::arg("target_order") = 0.0, py::arg("tol") = 1e-6);

    m.def(
        "weight_constant",
        [](const py::object& w, const ExponentConfig& cfg, const std::string& kind, int depth, double tol) {
            SearchFamily search;
            search.depth = depth;
            search.validate();
            const SymbolicFunction omega = as_function(w);
            WeightConstant k;
            if (kind == "bpq") k = bpq_constant(WeightPair(omega, cfg), cfg, search, make_qc(tol));
            else if (kind == "bp") k = bp_constant(omega, cfg.p, cfg.alpha, search, make_qc(tol));
            else throw InputError("kind must be bpq or bp, got '" + kind + "'");
            return py::dict(py::arg("value") = k.value, py::arg("argmax") = py::make_tuple(k.argmax.left(), k.argmax.length()),
                            py::arg("intervals") = k.intervals);
        },
        py::arg("w"), py::arg("cfg"), py::arg("kind") = "bpq", py::arg("depth") = 12, py::arg("tol") = 1e-8);

    m.def(
        "dyadic_apply",
        [](const py::object& f, const ExponentConfig& cfg, double x, double y, double beta, int j_min, int j_max,
           double tol) {
            TruncatedGrid g;
            g.beta = beta;
            g.j_min = j_min;
            g.j_max = j_max;
            g.validate();
            const DyadicSum s = dyadic_model_apply(as_function(f), cfg, g, HalfPlanePoint(x, y), make_qc(tol));
            return py::make_tuple(s.value, s.boxes);
        },
        py::arg("f"), py::arg("cfg"), py::arg("x"), py::arg("y"), py::arg("beta") = 0.0, py::arg("j_min") = -14,
        py::arg("j_max") = 7, py::arg("tol") = 1e-8, "(value, number of boxes containing the point).");

    m.def(
        "tiling_violations",
        [](double beta, double x0, double x1, double y0, double y1, std::size_t samples, std::uint64_t seed) {
            TruncatedGrid g;
            g.beta = beta;
            g.validate();
            return tent_tiling_check(g, Rect{x0, x1, y0, y1}, samples, seed).violations;
        },
        py::arg("beta"), py::arg("x0") = -4.0, py::arg("x1") = 4.0, py::arg("y0") = 1.0 / 64, py::arg("y1") = 8.0,
        py::arg("samples") = 10000, py::arg("seed") = 1);

    m.def(
        "admissible",
        [](double p, double q, double alpha, double a) {
            return admissibility(OffDiagonalConfig::with_default_target(p, q, alpha, a));
        },
        py::arg("p"), py::arg("q"), py::arg("alpha"), py::arg("a"));

    m.def(
        "solve_rst",
        [](double p, double q, double alpha, double a) {
            const SchurParameters sp = solve_rst(OffDiagonalConfig::with_default_target(p, q, alpha, a));
            return py::make_tuple(sp.r, sp.s, sp.t);
        },
        py::arg("p"), py::arg("q"), py::arg("alpha"), py::arg("a"), "(r, s, t) for the Schur test of T+.");

    m.def(
        "lemma_scaling",
        [](double p, double nu, double gamma, const std::vector<double>& ts, double tol) {
            const LemmaScaling r = lemma_norm_scaling(p, nu, gamma, ts, make_qc(tol));
            return py::dict(py::arg("norms") = r.norms, py::arg("slope") = r.fit.slope,
                            py::arg("expected_slope") = r.expected_slope);
        },
        py::arg("p"), py::arg("nu"), py::arg("gamma"), py::arg("t"), py::arg("tol") = 1e-8);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "(exit code, stdout, stderr) of one command line.");
}
