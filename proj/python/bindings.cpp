#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "circlepat/cli.hpp"
#include "circlepat/io.hpp"

namespace py = pybind11;
using namespace circlepat;

namespace {

DevelopedPattern developed(const Pattern& p, int root) {
  const Triangulation& tri = *p.tri;
  if (root < 0 || root >= tri.n_faces()) {
    throw Error(ErrorKind::InvalidInput, "root face out of range");
  }
  const FundamentalDomain domain = p.cut.empty() ? fundamental_domain(tri, root) : fundamental_domain(tri, root, p.cut);
  DevelopOptions d;
  if (root == 0 && p.seed) {
    d.seed = p.seed;
  }
  return develop(p.X, domain, d);
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Pattern with_log_mag(const Pattern& p, std::vector<double> log_mag) {
  return Pattern{p.tri, CrossRatioSystem(p.tri, std::move(log_mag), p.X.theta()), p.cut, p.seed};
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = cli::kVersion;

  static py::exception<Error> error(m, "CirclepatError");
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) {
        std::rethrow_exception(ptr);
      }
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<Pattern>(m, "Pattern")
      .def_static("from_json", [](const std::string& s) {
        Json j;
        try {
          j = Json::parse(s);
        } catch (const Json::exception& e) {
          throw Error(ErrorKind::Format, e.what());
        }
        return pattern_from_json(j);
      })
      .def("to_json", [](const Pattern& p) { return to_json(p).dump(); })
      .def_property_readonly("n_vertices", [](const Pattern& p) { return p.tri->n_vertices(); })
      .def_property_readonly("n_edges", [](const Pattern& p) { return p.tri->n_edges(); })
      .def_property_readonly("n_faces", [](const Pattern& p) { return p.tri->n_faces(); })
      .def_property_readonly("genus", [](const Pattern& p) { return p.tri->genus(); })
      .def_property_readonly("theta", [](const Pattern& p) { return p.X.theta(); })
      .def_property_readonly("log_mag", [](const Pattern& p) { return p.X.log_mag(); })
      .def("values", [](const Pattern& p) { return p.X.values(); })
      .def("max_residual", [](const Pattern& p) { return max_residual(p.X); })
      .def("with_log_mag", &with_log_mag, py::arg("log_mag"))
      .def(
          "kernel",
          [](const Pattern& p, const std::string& field, double tol) {
            if (field != "complex" && field != "real") {
              throw Error(ErrorKind::InvalidInput, "field must be \"complex\" or \"real\"");
            }
            const KernelBasis k = field == "real" ? kernel_real(p.X, tol) : kernel_complex(p.X, tol);
            return k.basis;
          },
          py::arg("field") = "complex", py::arg("tol") = 1e-9)
      .def("max_linearized_residual",
           [](const Pattern& p, const Eigen::VectorXcd& x) { return max_linearized_residual(p.X, x); })
      .def("omega_P", [](const Pattern& p, const Eigen::VectorXcd& x,
                         const Eigen::VectorXcd& y) { return omega_P(*p.tri, x, y); })
      .def(
          "omega_cup",
          [](const Pattern& p, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int root) {
            return omega_cup(developed(p, root), x, y);
          },
          py::arg("x"), py::arg("y"), py::arg("root_face") = 0)
      .def(
          "omega_G",
          [](const Pattern& p, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int root, int vertex) {
            return omega_G(developed(p, root), x, y, vertex);
          },
          py::arg("x"), py::arg("y"), py::arg("root_face") = 0, py::arg("root_vertex") = 0)
      .def("vertex_move_field", [](const Pattern& p, int i) { return vertex_move_field(developed(p, 0), i); })
      .def("coboundary_distance",
           [](const Pattern& p, const Eigen::VectorXcd& x) { return coboundary_distance(hol(x, developed(p, 0))); })
      .def("holonomy", [](const Pattern& p, int root) { return to_python(holonomy_json(developed(p, root))); },
           py::arg("root_face") = 0)
      .def(
          "check_theorem",
          [](const Pattern& p, double tol) {
            TheoremOptions o;
            o.tol = tol;
            return to_python(to_json(check_theorem(developed(p, 0), o)));
          },
          py::arg("tol") = 1e-9)
      .def("rigidity", [](const Pattern& p, double tol) { return to_python(to_json(rigidity_check(developed(p, 0), tol))); },
           py::arg("tol") = 1e-9)
      .def("delaunay", [](const Pattern& p, int max_cycle_len) {
             return to_python(to_json(is_delaunay(*p.tri, p.X.theta(), max_cycle_len)));
           },
           py::arg("max_cycle_len") = 12);

  m.def("example", [](const std::string& name) {
    if (name == "hex-torus") {
      return example_hex_torus();
    }
    if (name == "bolza") {
      return example_bolza();
    }
    if (name == "octahedron") {
      return example_octahedron();
    }
    throw Error(ErrorKind::InvalidInput, "unknown example " + name);
  });

  m.def(
      "solve",
      [](const Pattern& p, const std::vector<double>& log_mag0, double tol, int max_iter) {
        SolveOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        const SolveResult r = solve_pattern(p.tri, p.X.theta(), log_mag0, o);
        return py::make_tuple(with_log_mag(p, r.log_mag), r.iterations, r.residual);
      },
      py::arg("pattern"), py::arg("log_mag0"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100);

  m.def("trace_pair_identity", &trace_pair_identity);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"circlepat"};
    for (const std::string& a : args) {
      argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
