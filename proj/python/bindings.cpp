#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bilin/cli.hpp"
#include "bilin/error.hpp"
#include "bilin/gallery.hpp"

namespace py = pybind11;
using namespace bilin;

namespace {

// Scalars cross the boundary as canonical text; ints and strs are accepted on the way in.
Scalar to_scalar(const py::handle& h, const FieldSpec& f) { return Scalar::parse(std::string(py::str(h)), f); }

Vector to_vector(const py::sequence& s, const FieldSpec& f) {
  Vector v;
  for (auto x : s) v.push_back(to_scalar(x, f));
  return v;
}

Tuple to_tuple(const py::sequence& s, const FieldSpec& f) {
  Tuple t;
  for (auto x : s) t.push_back(to_vector(x.cast<py::sequence>(), f));
  return t;
}

std::vector<std::string> from_vector(const Vector& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.format());
  return out;
}

std::vector<std::vector<std::string>> from_tuple(const Tuple& t) {
  std::vector<std::vector<std::string>> out;
  for (const auto& v : t) out.push_back(from_vector(v));
  return out;
}

std::vector<std::vector<std::string>> rows_of(const Matrix& m) { return from_tuple(m.row_list()); }

Assignment to_assignment(const py::dict& d, const FieldSpec& f) {
  Assignment a;
  for (auto [k, v] : d) a[std::string(py::str(k))] = to_vector(v.cast<py::sequence>(), f);
  return a;
}

py::dict report_dict(const DemoReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["passed"] = r.passed();
  py::dict values;
  for (const auto& [k, v] : r.values) values[py::str(k)] = v;
  d["values"] = values;
  py::list checks;
  for (const auto& c : r.checks) checks.append(py::make_tuple(c.claim, c.passed, c.value));
  d["checks"] = checks;
  d["text"] = r.render();
  return d;
}

IndepMethod method_of(const std::string& m) {
  if (m == "span") return IndepMethod::SpanIntersection;
  if (m == "basis") return IndepMethod::BasisExtension;
  throw Error(ErrorKind::InvalidArgument, "method must be 'span' or 'basis', got '" + m + "'");
}

}  // namespace

PYBIND11_MODULE(_bilin, m) {
  m.doc() = "Exact linear algebra and model theory of bilinear spaces.";

  static PyObject* error_type = PyErr_NewException("bilin.BilinError", PyExc_Exception, nullptr);
  m.attr("BilinError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(std::string(to_string(e.kind())) + ": " + e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<FieldSpec>(m, "Field")
      .def(py::init([](const std::string& text) { return FieldSpec::parse(text); }))
      .def_property_readonly("is_finite", &FieldSpec::is_finite)
      .def_property_readonly("characteristic", &FieldSpec::characteristic)
      .def("elements", [](const FieldSpec& f) { return from_vector(enumerate_field(f)); })
      .def("__str__", &FieldSpec::to_string)
      .def("__repr__", [](const FieldSpec& f) { return "Field('" + f.to_string() + "')"; })
      .def(py::self == py::self);

  m.def("canonical_scalar", [](const py::object& x, const FieldSpec& f) { return to_scalar(x, f).format(); });

  py::class_<BilinearSpace>(m, "Space")
      .def(py::init([](const FieldSpec& f, const std::string& flavor, const py::sequence& gram) {
             Tuple rows = to_tuple(gram, f);
             return BilinearSpace::from_gram(f, parse_flavor(flavor), Matrix::from_rows(f, rows.size(), rows));
           }),
           py::arg("field"), py::arg("flavor"), py::arg("gram"))
      .def_static("zero", [](const FieldSpec& f, const std::string& flavor,
                             std::size_t dim) { return BilinearSpace::zero_form(f, parse_flavor(flavor), dim); })
      .def_static("parse", [](const std::string& text) { return BilinearSpace::parse_file(text); })
      .def_property_readonly("field", &BilinearSpace::field)
      .def_property_readonly("flavor", [](const BilinearSpace& v) { return std::string(to_string(v.flavor())); })
      .def_property_readonly("dim", &BilinearSpace::dim)
      .def_property_readonly("gram", [](const BilinearSpace& v) { return rows_of(v.gram()); })
      .def("form",
           [](const BilinearSpace& v, const py::sequence& x, const py::sequence& y) {
             return v.form(to_vector(x, v.field()), to_vector(y, v.field())).format();
           })
      .def("to_file", &BilinearSpace::to_file)
      .def("__eq__", [](const BilinearSpace& a, const BilinearSpace& b) { return a == b; })
      .def("__repr__", [](const BilinearSpace& v) {
        return "<Space " + v.field().to_string() + " " + to_string(v.flavor()) + " dim " + std::to_string(v.dim()) + ">";
      });

  py::class_<Formula>(m, "Formula")
      .def(py::init([](const std::string& text, const FieldSpec& f) { return parse_formula(text, f); }))
      .def_property_readonly("free_variables",
                             [](const Formula& f) {
                               auto vs = f.free_variables();
                               return std::vector<std::string>(vs.begin(), vs.end());
                             })
      .def_property_readonly("is_quantifier_free", &Formula::is_quantifier_free)
      .def("__str__", [](const Formula& f) { return print_formula(f); })
      .def("__repr__", [](const Formula& f) { return "Formula('" + print_formula(f) + "')"; })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; });

  m.def(
      "is_independent",
      [](const BilinearSpace& v, const py::sequence& a, const py::sequence& b, const py::sequence& c,
         const std::string& method) {
        const auto& f = v.field();
        return is_independent(v, to_tuple(a, f), to_tuple(b, f), to_tuple(c, f), method_of(method));
      },
      py::arg("space"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("method") = "span");
  m.def("local_base", [](const BilinearSpace& v, const py::sequence& a, const py::sequence& b) {
    return from_tuple(local_base(v, to_tuple(a, v.field()), to_tuple(b, v.field())));
  });
  m.def(
      "amalgamate",
      [](const std::string& map1, const std::string& map2) {
        AmalgamResult r = amalgamate_independent(parse_map_file(map1), parse_map_file(map2));
        return py::make_tuple(r.space, rows_of(r.g1.matrix), rows_of(r.g2.matrix));
      },
      "Independent amalgam of two map files over a shared source: (space, g1, g2).");
  m.def(
      "amalgamate3",
      [](const std::string& cube) {
        Cube c = Cube::parse_file(cube);
        Amalgam3Result r = amalgamate3(c);
        return py::make_tuple(r.space, rows_of(r.v1.matrix), rows_of(r.v2.matrix), rows_of(r.v3.matrix),
                              amalgam3_violations(c, r));
      },
      "(space, v1, v2, v3, violations) for a cube file.");
  m.def("closure", [](const BilinearSpace& v) {
    Closure c = nondegenerate_closure(v);
    return py::make_tuple(c.space, rows_of(c.inclusion.matrix));
  });

  m.def(
      "evaluate",
      [](const Formula& f, const BilinearSpace& v, const py::dict& assignment, const std::string& mode) {
        Assignment a = to_assignment(assignment, v.field());
        if (mode == "qf") return eval(f, v, a, EvalMode::QuantifierFree);
        if (mode == "brute") return eval(f, v, a, EvalMode::Brute);
        if (mode == "ec") return ec_eval_finite(v.field(), v.flavor(), v, f, a);
        throw Error(ErrorKind::InvalidArgument, "mode must be qf, brute or ec, got '" + mode + "'");
      },
      py::arg("formula"), py::arg("space"), py::arg("assignment"), py::arg("mode") = "qf");
  m.def("theta", &theta);
  m.def("qf_linear_independence", &qf_linear_independence);
  m.def("semi_hausdorff_formula", &semi_hausdorff_formula);
  m.def(
      "forced_value",
      [](const Formula& f, const std::string& flavor) {
        auto parts = to_regular_disjunction(f);
        if (parts.size() != 1) throw Error(ErrorKind::InvalidArgument, "expected a single regular formula");
        return forced_bilinear_value(parts.front(), parse_flavor(flavor)).format();
      },
      py::arg("formula"), py::arg("flavor") = "symmetric");
  m.def("qe", [](const Formula& f, std::size_t n, const FieldSpec& field,
                 const std::string& flavor) { return qe_finite(f, n, field, parse_flavor(flavor)); });

  m.def("type_key", [](const BilinearSpace& v, const py::sequence& t) {
    return qf_type_of(v, to_tuple(t, v.field())).key();
  });
  m.def("enumerate_types", [](std::size_t n, const FieldSpec& f, const std::string& flavor) {
    std::vector<std::string> keys;
    for (const auto& t : enumerate_qf_types(n, f, parse_flavor(flavor))) keys.push_back(t.key());
    return keys;
  });
  m.def("isolating_formula", [](const BilinearSpace& v, const py::sequence& t) {
    return isolating_formula(qf_type_of(v, to_tuple(t, v.field())), v.field());
  });
  m.def("instability", [](std::size_t k, const FieldSpec& f, const std::string& flavor) {
    InstabilityWitness w = instability_witness(k, f, parse_flavor(flavor));
    return py::make_tuple(w.space, from_tuple(w.parameters), from_tuple(w.vectors));
  });

  m.def("demo_stationarity", [](const BilinearSpace& c) { return report_dict(demo_stationarity(c)); });
  m.def("demo_hilbert", [] { return report_dict(demo_hilbert_3amalg()); });
  m.def(
      "demo_hausdorff",
      [](const FieldSpec& f, const std::string& flavor) {
        return report_dict(demo_hausdorff_failure(f, parse_flavor(flavor)));
      },
      py::arg("field"), py::arg("flavor") = "plain");
  m.def(
      "demo_qe_refuter",
      [](const Formula& psi, std::size_t n, const std::string& flavor, std::size_t retries, std::uint64_t seed) {
        return report_dict(demo_qe_refuter(psi, n, psi.field(), parse_flavor(flavor), retries, seed));
      },
      py::arg("psi"), py::arg("n"), py::arg("flavor") = "symmetric", py::arg("retries") = 200, py::arg("seed") = 1);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs the command-line front end in-process: (status, stdout, stderr).");
}
