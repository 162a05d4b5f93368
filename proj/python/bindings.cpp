#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tw/gl_baxter.hpp"
#include "tw/gl_whittaker.hpp"
#include "tw/local_lfactors.hpp"
#include "tw/numerics.hpp"
#include "tw/rankin_selberg.hpp"
#include "tw/so_toda.hpp"

namespace py = pybind11;
using namespace tw;

namespace {

using CVec = std::vector<Complex>;
using RVec = std::vector<double>;

QuadOptions quad(long budget, int workers) {
    QuadOptions o;
    if (budget > 0) o.max_evaluations = budget;
    o.workers = workers;
    return o;
}

SpectralParams sp(const CVec& v) { return SpectralParams{v, Convention::Givental}; }

BaxterConvention convention(const std::string& s, size_t n) {
    if (s == "lie") return BaxterConvention::lie();
    if (s == "iwasawa") return BaxterConvention::iwasawa();
    if (s == "iwasawa-pi") return BaxterConvention::iwasawa_pi(n);
    throw InvalidArgument("convention must be lie, iwasawa or iwasawa-pi");
}

std::vector<Step> word(const std::string& w) {
    std::vector<Step> out;
    for (char c : w) {
        if (c == 'L')
            out.push_back(Step::L);
        else if (c == 'R')
            out.push_back(Step::R);
        else
            throw InvalidArgument("word letters must be L or R");
    }
    return out;
}

// Fraction, int or str
Rational to_rational(const py::handle& h) { return parse_rational(py::str(h).cast<std::string>()); }

py::object to_fraction(const Rational& r) {
    static py::object Fraction = py::module_::import("fractions").attr("Fraction");
    return Fraction(py::int_(py::str(numerator(r).str())), py::int_(py::str(denominator(r).str())));
}

SatakeClass satake(const py::sequence& params, long p) {
    SatakeClass s;
    s.p = p;
    for (auto h : params) s.params.push_back(to_rational(h));
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Whittaker functions, Baxter operators and local L-factors";

    auto err = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", err.ptr());
    py::register_exception<PoleError>(m, "PoleError", err.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", err.ptr());
    py::register_exception<ContourError>(m, "ContourError", err.ptr());
    py::register_exception<RankError>(m, "RankError", err.ptr());
    py::register_exception<ShiftError>(m, "ShiftError", err.ptr());
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", err.ptr());
    py::register_exception<IndexError>(m, "IndexError", err.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", err.ptr());

    py::class_<QuadratureResult>(m, "QuadratureResult")
        .def_readonly("value", &QuadratureResult::value)
        .def_readonly("abs_error", &QuadratureResult::abs_error)
        .def_readonly("evaluations", &QuadratureResult::evaluations)
        .def_readonly("converged", &QuadratureResult::converged)
        .def("__repr__", [](const QuadratureResult& r) {
            return "QuadratureResult(value=" + py::repr(py::cast(r.value)).cast<std::string>() +
                   ", abs_error=" + std::to_string(r.abs_error) + ")";
        });
    py::class_<IdentityCheck>(m, "IdentityCheck")
        .def_readonly("lhs", &IdentityCheck::lhs)
        .def_readonly("rhs", &IdentityCheck::rhs)
        .def_readonly("residual", &IdentityCheck::residual)
        .def_readonly("abs_error", &IdentityCheck::abs_error);

    m.def("gamma_product", [](const CVec& z) { return gamma_product(z); });
    m.def("macdonald_k", [](Complex nu, double y) { return macdonald_k(nu, y); }, py::arg("nu"), py::arg("y"));

    // gl Whittaker functions
    m.def("closed_form_gl2", &closed_form_gl2, py::arg("l1"), py::arg("l2"), py::arg("x1"), py::arg("x2"));
    m.def(
        "givental_eval",
        [](const CVec& l, const RVec& x, double tol, long budget, int workers) {
            return givental_eval(sp(l), x, tol, quad(budget, workers));
        },
        py::arg("lam"), py::arg("x"), py::arg("tol") = 1e-8, py::arg("budget") = 0, py::arg("workers") = 1);
    m.def(
        "givental_recursive_eval",
        [](const CVec& l, const RVec& x, double tol, long budget, int workers) {
            return givental_recursive_eval(sp(l), x, tol, quad(budget, workers));
        },
        py::arg("lam"), py::arg("x"), py::arg("tol") = 1e-8, py::arg("budget") = 0, py::arg("workers") = 1);
    m.def(
        "mellin_barnes_eval",
        [](const CVec& l, const RVec& x, double tol, long budget, int workers) {
            return mellin_barnes_eval(sp(l), x, std::nullopt, tol, quad(budget, workers));
        },
        py::arg("lam"), py::arg("x"), py::arg("tol") = 1e-8, py::arg("budget") = 0, py::arg("workers") = 1);
    m.def(
        "mixed_eval",
        [](const std::string& w, const CVec& l, const RVec& x, double tol, long budget, int workers) {
            auto ws = word(w);
            return mixed_eval(ws, sp(l), x, std::nullopt, tol, quad(budget, workers));
        },
        py::arg("word"), py::arg("lam"), py::arg("x"), py::arg("tol") = 1e-8, py::arg("budget") = 0,
        py::arg("workers") = 1);
    m.def("plancherel_measure", [](const CVec& l) { return plancherel_measure(sp(l)); });

    // so Whittaker functions
    m.def("closed_form_so3", &closed_form_so3, py::arg("lam"), py::arg("x"));
    m.def(
        "so_givental_eval",
        [](const CVec& l, const RVec& x, double tol) { return so_givental_eval(l, x, tol); }, py::arg("lam"),
        py::arg("x"), py::arg("tol") = 1e-8);
    m.def(
        "so_baxter_apply",
        [](Complex g, const CVec& l, const RVec& y, double tol, double delta) {
            return so_baxter_apply(g, l, y, tol, delta);
        },
        py::arg("gamma"), py::arg("lam"), py::arg("y"), py::arg("tol") = 1e-7, py::arg("delta") = 0.25);
    m.def("so_baxter_eigenvalue", [](Complex g, const CVec& l) { return so_baxter_eigenvalue(g, l); });

    // Baxter operators
    m.def(
        "baxter_eigenvalue",
        [](Complex g, const CVec& l, const std::string& c) { return baxter_eigenvalue(g, l, convention(c, l.size())); },
        py::arg("gamma"), py::arg("lam"), py::arg("convention") = "lie");
    m.def(
        "baxter_eigenfunction",
        [](const CVec& l, const RVec& x, const std::string& c) {
            return baxter_eigenfunction(l, x, convention(c, l.size()));
        },
        py::arg("lam"), py::arg("x"), py::arg("convention") = "lie");
    // Q(gamma) applied to the eigenfunction with parameters lam
    m.def(
        "baxter_apply",
        [](Complex g, const CVec& l, const RVec& y, const std::string& c, double tol, double delta) {
            auto conv = convention(c, l.size());
            Evaluator psi = [&](std::span<const double> x) { return baxter_eigenfunction(l, x, conv, tol); };
            return baxter_apply(g, psi, l, y, conv, tol, delta);
        },
        py::arg("gamma"), py::arg("lam"), py::arg("y"), py::arg("convention") = "lie", py::arg("tol") = 1e-8,
        py::arg("delta") = 0.25);
    m.def(
        "baxter_kernel",
        [](const RVec& x, const RVec& y, Complex g, const std::string& c) {
            return baxter_kernel(x, y, g, convention(c, x.size()));
        },
        py::arg("x"), py::arg("y"), py::arg("gamma"), py::arg("convention") = "lie");
    m.def(
        "commutation_residual",
        [](Complex a, Complex b, const RVec& y, const RVec& z, double tol) {
            return commutation_residual(a, b, y, z, tol);
        },
        py::arg("a"), py::arg("b"), py::arg("y"), py::arg("z"), py::arg("tol") = 1e-8);
    m.def(
        "spherical_transform_rank2",
        [](Complex g1, Complex g2, Complex lam, double tol) { return spherical_transform_rank2(g1, g2, lam, tol); },
        py::arg("g1"), py::arg("g2"), py::arg("lam"), py::arg("tol") = 1e-6);

    // Rankin-Selberg
    m.def(
        "bump_friedberg_integral",
        [](int ell, const CVec& g, const CVec& l, Complex t, double tol) {
            return bump_friedberg_integral(ell, sp(g), sp(l), t, tol);
        },
        py::arg("ell"), py::arg("gamma"), py::arg("lam"), py::arg("t"), py::arg("tol") = 1e-8);
    m.def("bump_friedberg_rhs", [](const CVec& g, const CVec& l, Complex t) { return bump_friedberg_rhs(sp(g), sp(l), t); });
    m.def(
        "stade_kernel",
        [](const RVec& top, const RVec& bot, Complex a, Complex b) {
            return stade_kernel(top, bot, {a, b});
        },
        py::arg("x_top"), py::arg("x_bot"), py::arg("lam_l"), py::arg("lam_next"));
    m.def(
        "double_step_kernel",
        [](const RVec& top, const RVec& bot, Complex a, Complex b, double tol) {
            return double_step_kernel(top, bot, {a, b}, tol);
        },
        py::arg("x_top"), py::arg("x_bot"), py::arg("lam_l"), py::arg("lam_next"), py::arg("tol") = 1e-9);
    m.def(
        "barnes_gustafson",
        [](std::pair<Complex, Complex> l, std::pair<Complex, Complex> g, double tol, std::optional<double> offset) {
            return barnes_gustafson(l, g, tol, offset);
        },
        py::arg("lam"), py::arg("gamma"), py::arg("tol") = 1e-10, py::arg("offset") = py::none());

    // local L-factors
    m.def("is_prime", &is_prime);
    m.def("archimedean_lfactor", [](const CVec& a, Complex s) { return archimedean_lfactor(a, s); }, py::arg("alpha"),
          py::arg("s"));
    m.def(
        "local_lfactor_p",
        [](const py::sequence& params, long p, const py::object& s) -> py::object {
            if (py::isinstance<py::int_>(s)) return to_fraction(local_lfactor_p(satake(params, p), s.cast<long>()));
            SatakeClassC c;
            c.p = p;
            for (auto h : params) c.params.push_back(h.cast<Complex>());
            return py::cast(local_lfactor_p(c, s.cast<Complex>()));
        },
        py::arg("satake"), py::arg("p"), py::arg("s"),
        "exact Fraction for integer s and rational parameters, complex otherwise");
    m.def(
        "hecke_t_series",
        [](const py::sequence& params, long p, size_t N) {
            std::vector<py::object> out;
            for (auto& c : hecke_t_series(satake(params, p), N).coeffs) out.push_back(to_fraction(c));
            return out;
        },
        py::arg("satake"), py::arg("p"), py::arg("order"));
    m.def(
        "hecke_q_series",
        [](const py::sequence& params, long p, size_t N) {
            std::vector<py::object> out;
            for (auto& c : hecke_q_series(satake(params, p), N).coeffs) out.push_back(to_fraction(c));
            return out;
        },
        py::arg("satake"), py::arg("p"), py::arg("order"));
    m.def(
        "verify_tq_identity", [](const py::sequence& params, long p, size_t N) { return verify_tq_identity(satake(params, p), N); },
        py::arg("satake"), py::arg("p"), py::arg("order"));
}
