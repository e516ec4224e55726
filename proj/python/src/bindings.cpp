#include <algorithm>
#include <cmath>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degenbond/assembly.hpp"
#include "degenbond/config.hpp"
#include "degenbond/errors.hpp"
#include "degenbond/experiments.hpp"

namespace py = pybind11;
using namespace degenbond;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

SchemeChoice single_scheme(const std::string& name) {
    const auto s = scheme_from_string(name);
    if (!s || *s == SchemeChoice::Both) throw ValidationError("scheme", "expected fitted or scheme_b");
    return *s;
}

py::dict report_dict(const ErrorReport& rep) {
    py::dict d;
    d["nodes"] = rep.nodes;
    d["steps"] = rep.steps;
    d["c_norm"] = rep.c_norm;
    d["l2_norm"] = rep.l2_norm;
    d["h1_norm"] = rep.h1_norm;
    d["generalized"] = rep.generalized;
    return d;
}

py::object optional_float(const std::optional<double>& v) {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict config_summary(const std::string& text) {
    const auto cfg = parse_config(text);
    py::dict d;
    d["problem"] = cfg.problem_id;
    d["nodes"] = cfg.nodes;
    d["steps"] = cfg.steps;
    d["xi"] = cfg.xi;
    d["scheme"] = std::string(to_string(cfg.scheme));
    d["manufactured"] = cfg.manufactured;
    d["hash"] = hash_hex(cfg.hash);
    return d;
}

py::dict run(const std::string& text, std::optional<std::size_t> nodes, const std::string& scheme) {
    const auto cfg = parse_config(text);
    const auto spec = build_problem(cfg);
    const auto choice = single_scheme(scheme);
    RunOutput out;
    {
        py::gil_scoped_release release;
        out = run_single(cfg, spec, choice, nodes.value_or(cfg.nodes));
    }
    py::dict d;
    d["scheme"] = out.scheme_id;
    d["r"] = to_array(out.mesh.nodes);
    d["P"] = to_array(out.march.final.values);
    d["t"] = out.march.final.time;
    if (spec.exact) {
        std::vector<double> u;
        for (double r : out.mesh.nodes) u.push_back(spec.exact->u(r, out.march.final.time));
        d["u"] = to_array(u);
    } else {
        d["u"] = py::none();
    }
    d["errors"] = out.errors ? py::object(report_dict(*out.errors)) : py::object(py::none());
    d["m_matrix_failures"] = out.march.steps_failing_m_matrix;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : out.march.diagnostics) {
        lo = std::min(lo, s.min_solution);
        hi = std::max(hi, s.max_solution);
    }
    d["min_solution"] = lo;
    d["max_solution"] = hi;
    return d;
}

py::dict sweep(const std::string& text, const std::vector<std::size_t>& nodes, const std::string& scheme,
               std::size_t threads) {
    const auto cfg = parse_config(text);
    const auto spec = build_problem(cfg);
    const auto choice = single_scheme(scheme);
    SweepResult res;
    {
        py::gil_scoped_release release;
        res = run_convergence_sweep(cfg, spec, nodes.empty() ? cfg.sweep_nodes : nodes, choice, threads);
    }
    py::list rows;
    for (const auto& row : res.table.rows) {
        py::dict d;
        d["nodes"] = row.nodes;
        d["c_norm"] = row.c_norm;
        d["l2_norm"] = row.l2_norm;
        d["h1_norm"] = row.h1_norm;
        d["c_rate"] = optional_float(row.c_rate);
        d["l2_rate"] = optional_float(row.l2_rate);
        d["h1_rate"] = optional_float(row.h1_rate);
        rows.append(d);
    }
    py::dict d;
    d["scheme"] = res.scheme_id;
    d["rows"] = rows;
    d["failure"] = res.failure ? py::object(py::str(*res.failure)) : py::object(py::none());
    d["numerical_failure"] = res.numerical_failure;
    return d;
}

py::list compare(const std::string& text, const std::vector<std::size_t>& nodes,
                 std::optional<std::vector<long>> report_nodes, std::optional<double> t) {
    const auto cfg = parse_config(text);
    const auto spec = build_problem(cfg);
    std::vector<ComparisonRow> rows;
    {
        py::gil_scoped_release release;
        rows = run_ab_comparison(cfg, spec, nodes.empty() ? std::vector<std::size_t>{cfg.nodes} : nodes,
                                 report_nodes.value_or(cfg.report_nodes),
                                 t.value_or(cfg.snapshot_t.value_or(spec.T)));
    }
    py::list out;
    for (const auto& row : rows) {
        py::dict d;
        d["nodes"] = row.nodes;
        d["node"] = row.node_index;
        d["r"] = row.r;
        d["t"] = row.t;
        d["u"] = row.exact;
        d["error_fitted"] = row.error_fitted;
        d["error_scheme_b"] = row.error_scheme_b;
        out.append(d);
    }
    return out;
}

py::dict assemble(const std::string& problem, std::size_t intervals, double t, bool manufactured) {
    const auto spec = builtin_problem(problem, manufactured);
    const auto s = assemble_fitted(spec, factor_coefficients(spec), uniform_spatial(intervals, spec.R), t);
    py::dict d;
    d["sub"] = to_array(s.e_sub);
    d["diag"] = to_array(s.e_diag);
    d["super"] = to_array(s.e_super);
    d["hbar"] = to_array(s.hbar_weights);
    d["load"] = to_array(s.load);
    return d;
}

}  // namespace

PYBIND11_MODULE(_degenbond, m) {
    m.doc() = "Fitted finite-volume solver for the degenerate bond pricing equation";

    static py::exception<Error> base(m, "DegenbondError", PyExc_RuntimeError);
    static py::exception<ValidationError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<SingularSystem> numerical_error(m, "NumericalError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::set_error(config_error, e.what());
        } catch (const ValidationError& e) {
            py::set_error(config_error, e.what());
        } catch (const NonFiniteSolution& e) {
            py::set_error(numerical_error, e.what());
        } catch (const SingularSystem& e) {
            py::set_error(numerical_error, e.what());
        } catch (const NumericalOverflow& e) {
            py::set_error(numerical_error, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def("parse_config", &config_summary, py::arg("text"),
          "Parse config text and return its main settings and hash.");
    m.def("run", &run, py::arg("config"), py::arg("nodes") = py::none(), py::arg("scheme") = "fitted",
          "Single solve. Returns nodes, final solution and error norms when an exact solution exists.");
    m.def("sweep", &sweep, py::arg("config"), py::arg("nodes") = std::vector<std::size_t>{},
          py::arg("scheme") = "fitted", py::arg("threads") = 0,
          "Convergence sweep over node counts that double in subintervals.");
    m.def("compare", &compare, py::arg("config"), py::arg("nodes") = std::vector<std::size_t>{},
          py::arg("report_nodes") = py::none(), py::arg("t") = py::none(),
          "Nodal errors of the fitted scheme and the central-difference baseline.");
    m.def("assemble", &assemble, py::arg("problem"), py::arg("intervals"), py::arg("t") = 0.0,
          py::arg("manufactured") = true, "Fitted operator rows of a built-in problem on a uniform mesh.");
}
