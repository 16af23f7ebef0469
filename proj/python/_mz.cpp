#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mz/convex_geom.hpp"
#include "mz/errors.hpp"
#include "mz/euler.hpp"
#include "mz/fld_io.hpp"
#include "mz/harness.hpp"
#include "mz/operator.hpp"
#include "mz/profile.hpp"
#include "mz/schedule.hpp"
#include "mz/truncation.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Arrays carry the grid shape followed by one component axis.
Array to_array(const mz::GridField& f) {
  std::vector<py::ssize_t> shape(f.grid.shape.begin(), f.grid.shape.end());
  shape.push_back(f.components);
  Array out(shape);
  std::copy(f.data.begin(), f.data.end(), out.mutable_data());
  return out;
}

mz::GridField from_array(const Array& a, double spacing, const std::vector<double>& origin, const std::string& boundary) {
  if (a.ndim() < 2) throw mz::InvalidArgument("field arrays need grid axes plus a component axis");
  std::vector<int> shape;
  for (py::ssize_t k = 0; k + 1 < a.ndim(); ++k) shape.push_back(static_cast<int>(a.shape(k)));
  const mz::Grid g = mz::Grid::make(shape, spacing, origin, mz::boundary_from_name(boundary));
  mz::GridField f(g, static_cast<int>(a.shape(a.ndim() - 1)));
  std::copy(a.data(), a.data() + a.size(), f.data.begin());
  return f;
}

py::dict grid_dict(const mz::Grid& g) {
  py::dict d;
  d["shape"] = g.shape;
  d["spacing"] = g.spacing;
  d["origin"] = g.origin;
  d["boundary"] = mz::boundary_name(g.boundary);
  return d;
}

mz::ConvexBody body(const std::string& text) { return mz::body_from_json(json::parse(text)); }

mz::HomogeneousOperator op_named(const std::string& name, int dim) { return mz::operator_from_json(json(name), dim); }

}  // namespace

PYBIND11_MODULE(_mz, m) {
  m.doc() = "Core bindings; JSON arguments and results are passed as strings.";

  py::register_exception<mz::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<mz::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<mz::DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

  m.def("read_fld", [](const std::string& path) {
    const mz::GridField f = mz::read_fld(path);
    return py::make_tuple(to_array(f), grid_dict(f.grid));
  });
  m.def("write_fld",
        [](const std::string& path, const Array& a, double spacing, const std::vector<double>& origin,
           const std::string& boundary) { mz::write_fld(path, from_array(a, spacing, origin, boundary)); },
        py::arg("path"), py::arg("array"), py::arg("spacing"), py::arg("origin") = std::vector<double>{},
        py::arg("boundary") = "extend");

  m.def("project", [](const std::string& body_json, const std::vector<double>& p) {
    const auto r = mz::project(body(body_json), Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()));
    return py::make_tuple(r.distance, std::vector<double>(r.foot_point.data(), r.foot_point.data() + r.foot_point.size()));
  });
  m.def("hausdorff", [](const std::string& a, const std::string& b) { return mz::hausdorff(body(a), body(b)); });
  m.def("sup_norm", [](const std::string& a) { return mz::sup_norm(body(a)); });

  m.def("profile_certificate", [](double eps, int samples) {
    const auto c = mz::make_profile(eps, 1.0).certify(samples);
    py::dict d;
    d["max_slope"] = c.max_slope;
    d["max_curvature"] = c.max_curvature;
    d["slope_bound"] = c.slope_bound;
    d["curvature_bound"] = c.curvature_bound;
    d["passed"] = c.passed();
    return d;
  }, py::arg("epsilon"), py::arg("samples") = 100000);

  m.def("build_schedule",
        [](double gamma, int d, double M, double alpha, double K_sup, double C1) {
          mz::ScheduleOptions o;
          o.C1 = C1;
          return mz::build_schedule(gamma, d, M, alpha, K_sup, o).to_json().dump();
        },
        py::arg("gamma"), py::arg("d"), py::arg("M"), py::arg("alpha"), py::arg("K_sup"), py::arg("C1"));

  m.def("operator_c1", [](const std::string& name, int dim) { return op_named(name, dim).c1(); });

  m.def("truncate_whole_space",
        [](const Array& u, double spacing, const std::vector<double>& origin, const std::string& op_name,
           const std::string& body_json, double gamma, double M, double alpha) {
          const mz::GridField f = from_array(u, spacing, origin, "extend");
          mz::WholeSpaceOptions o;
          o.alpha = alpha;
          const auto r = mz::truncate_whole_space(f, body(body_json), gamma, M, op_named(op_name, f.grid.dim), o);
          return py::make_tuple(to_array(r.g), r.report.to_json().dump());
        },
        py::arg("u"), py::arg("spacing"), py::arg("origin"), py::arg("operator"), py::arg("K"), py::arg("gamma"),
        py::arg("M"), py::arg("alpha") = 0.0);

  m.def("run_config",
        [](const std::string& config, const std::string& base_dir, std::optional<std::string> out_dir) {
          const auto r = mz::run_config(json::parse(config), base_dir, out_dir);
          return py::make_tuple(r.exit_code, r.message, r.report.dump());
        },
        py::arg("config"), py::arg("base_dir") = ".", py::arg("out_dir") = py::none());

  m.def("run_euler_potential", [](int d, int n, std::uint64_t seed) {
    const auto r = mz::run_euler_potential(d, n, seed);
    return py::make_tuple(to_array(r.state), r.report.dump());
  });

  m.def("symbol_check", [](const std::string& pair, int d, int trials, double tol) {
    if (pair == "euler") return mz::exactness_check(mz::euler_A_operator(d), mz::euler_B_operator(d), trials, tol).to_json().dump();
    if (pair == "symgrad") {
      const auto [b, a] = mz::symgrad_pair(d);
      return mz::exactness_check(a, b, trials, tol).to_json().dump();
    }
    throw mz::InvalidArgument("pair must be euler or symgrad");
  });
}
