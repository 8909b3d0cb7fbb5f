#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpart/mpart.hpp"

namespace py = pybind11;
using namespace mpart;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

LiftMode lift_mode(const std::string& s) {
  if (s == "auto") return LiftMode::Auto;
  if (s == "always") return LiftMode::Always;
  if (s == "never") return LiftMode::Never;
  throw py::value_error("lift must be 'auto', 'always' or 'never'");
}

std::string plot_any(const Instance& inst, const py::object& result) {
  if (result.is_none()) return plot_instance(inst);
  const Json j = from_python(result);
  const std::string kind = j.value("kind", "");
  if (kind == "projective-hs") return plot_hs(inst, hs_from_json(j));
  if (kind == "stripes") return plot_stripes(inst, stripes_from_json(j));
  return plot_report(inst, report_from_json(j));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mass partitions by fans, cones, double wedges and projective cuts";
  py::register_exception<Error>(m, "MpartError", PyExc_RuntimeError);

  py::class_<MassDistribution>(m, "MassDistribution")
      .def(py::init([](std::string name, Matrix atoms, std::optional<Vector> weights, double smoothing) {
             if (!weights) return MassDistribution::unit_weights(std::move(name), std::move(atoms), smoothing);
             return MassDistribution::make(std::move(name), std::move(atoms), *weights, smoothing);
           }),
           py::arg("name"), py::arg("atoms"), py::arg("weights") = py::none(),
           py::arg("smoothing") = kDefaultSmoothing)
      .def_readwrite("name", &MassDistribution::name)
      .def_readwrite("atoms", &MassDistribution::atoms)
      .def_readwrite("weights", &MassDistribution::weights)
      .def_readwrite("smoothing_radius", &MassDistribution::smoothing_radius)
      .def("__len__", [](const MassDistribution& mu) { return mu.size(); });

  py::class_<Instance>(m, "Instance")
      .def(py::init([](int d, std::vector<MassDistribution> masses, std::vector<std::vector<int>> families) {
             Instance inst{d, std::move(masses), std::move(families)};
             inst.validate();
             return inst;
           }),
           py::arg("dimension"), py::arg("masses"), py::arg("families") = std::vector<std::vector<int>>{})
      .def_readonly("dimension", &Instance::dimension)
      .def_readonly("masses", &Instance::masses)
      .def_readonly("families", &Instance::families)
      .def("to_json", &dump_instance)
      .def_static("load", [](const std::string& path) { return load_instance(path); })
      .def("save", [](const Instance& inst, const std::string& path) { save_instance(path, inst); });

  m.def("random_instance", &random_instance, py::arg("d"), py::arg("m"), py::arg("atoms_per_mass"), py::arg("seed"));
  m.def("make_simplex_counterexample", &make_simplex_counterexample, py::arg("d"));
  m.def("make_projective_tight_instance", &make_projective_tight_instance, py::arg("d"), py::arg("n"),
        py::arg("seed") = 1);
  m.def("make_planted_hs_instance", &make_planted_hs_instance, py::arg("d"), py::arg("points_per_set"),
        py::arg("seed"));
  m.def("make_random_hs_instance", &make_random_hs_instance, py::arg("d"), py::arg("families"), py::arg("sets"),
        py::arg("points_per_set"), py::arg("seed"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("grid_resolution", &SolverConfig::grid_resolution)
      .def_readwrite("multistarts", &SolverConfig::multistarts)
      .def_readwrite("max_refine_iters", &SolverConfig::max_refine_iters)
      .def_readwrite("tolerance", &SolverConfig::tolerance)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("smoothing", &SolverConfig::smoothing);

  m.def(
      "solve_cone",
      [](const Instance& inst, int k, const SolverConfig& cfg) { return to_python(to_json(solve_cone(inst, k, cfg), "cone")); },
      py::arg("instance"), py::arg("k"), py::arg("config") = SolverConfig{});
  m.def(
      "solve_fan",
      [](const Instance& inst, std::vector<double> targets, const SolverConfig& cfg, const std::string& lift) {
        return to_python(to_json(solve_fan(inst, targets, cfg, lift_mode(lift)), "fan"));
      },
      py::arg("instance"), py::arg("targets"), py::arg("config") = SolverConfig{}, py::arg("lift") = "auto");
  m.def(
      "solve_double_wedge",
      [](const Instance& inst, const SolverConfig& cfg) {
        return to_python(to_json(solve_double_wedge(inst, cfg), "double-wedge"));
      },
      py::arg("instance"), py::arg("config") = SolverConfig{});
  m.def(
      "solve_shared_h1",
      [](const Instance& inst, const SolverConfig& cfg, double eps_target) {
        return to_python(to_json(solve_shared_h1(inst, cfg, eps_target), "shared-h1"));
      },
      py::arg("instance"), py::arg("config") = SolverConfig{}, py::arg("eps_target") = 0.0);
  m.def(
      "solve_cone_apex_on_line",
      [](const Instance& inst, const Vector& point, const Vector& direction, const SolverConfig& cfg) {
        return to_python(to_json(solve_cone_apex_on_line(inst, Line{point, UnitVector(direction)}, cfg), "cone-on-line"));
      },
      py::arg("instance"), py::arg("point"), py::arg("direction"), py::arg("config") = SolverConfig{});
  m.def(
      "hs_after_transform",
      [](const Instance& inst, const SolverConfig& cfg) { return to_python(to_json(hs_after_transform(inst, cfg))); },
      py::arg("instance"), py::arg("config") = SolverConfig{});
  m.def(
      "stripes", [](const Instance& inst, int k, const SolverConfig& cfg) { return to_python(to_json(stripes(inst, k, cfg))); },
      py::arg("instance"), py::arg("k"), py::arg("config") = SolverConfig{});
  m.def(
      "verify",
      [](const Instance& inst, const py::object& result, double tol, std::optional<double> smoothing) {
        const double eps = smoothing.value_or(inst.masses.front().smoothing_radius);
        return to_python(to_json(verify_report(inst, report_from_json(from_python(result)), tol, eps)));
      },
      py::arg("instance"), py::arg("result"), py::arg("tolerance") = 2e-6, py::arg("smoothing") = py::none());
  m.def("plot_svg", &plot_any, py::arg("instance"), py::arg("result") = py::none());

  m.def(
      "feasibility",
      [](int d, int k, int masses, const std::string& variant) {
        const auto v = parse_variant(variant);
        if (!v) throw py::value_error("unknown variant '" + variant + "'");
        const Feasibility f = feasibility(d, k, masses, *v);
        return py::make_tuple(f.ok, f.explanation);
      },
      py::arg("d"), py::arg("k"), py::arg("m"), py::arg("variant"));
  m.def("gnomonic_lift", &gnomonic_lift, py::arg("q"));
  m.def("gnomonic_project", &gnomonic_project, py::arg("p"));
  m.def(
      "winding_number",
      [](const std::vector<std::array<double, 2>>& pts, bool closed) {
        std::vector<Eigen::Vector2d> v;
        for (const auto& p : pts) v.emplace_back(p[0], p[1]);
        return winding_number(v, closed);
      },
      py::arg("points"), py::arg("closed") = true);
  m.def(
      "sphere_map_degree",
      [](const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& f, int level) {
        return sphere_map_degree(f, level).degree;
      },
      py::arg("f"), py::arg("level") = 4);
}
