#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "d2dcache/baselines.hpp"
#include "d2dcache/dc_solver.hpp"
#include "d2dcache/experiment.hpp"
#include "d2dcache/extreme_solvers.hpp"
#include "d2dcache/model.hpp"
#include "d2dcache/projection.hpp"
#include "d2dcache/simulator.hpp"

namespace py = pybind11;
using namespace d2dcache;

PYBIND11_MODULE(d2dcache, m)
{
  m.doc() = "Caching placement for D2D-assisted two-tier wireless caching networks";

  py::register_exception<DcDescentError>(m, "DcDescentError", PyExc_RuntimeError);
  py::register_exception<NoBracketError>(m, "NoBracketError", PyExc_RuntimeError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
    .def(py::init<>())
    .def_static("table1", &ScenarioConfig::table1)
    .def_readwrite("n_contents", &ScenarioConfig::n_contents)
    .def_readwrite("gamma", &ScenarioConfig::gamma)
    .def_readwrite("lambda_ue", &ScenarioConfig::lambda_ue)
    .def_readwrite("lambda_h", &ScenarioConfig::lambda_h)
    .def_readwrite("r_ue", &ScenarioConfig::r_ue)
    .def_readwrite("r_h", &ScenarioConfig::r_h)
    .def_readwrite("alpha", &ScenarioConfig::alpha)
    .def_readwrite("m_ue", &ScenarioConfig::m_ue)
    .def_readwrite("m_h", &ScenarioConfig::m_h)
    .def("validate", &ScenarioConfig::validate)
    .def("warnings", &ScenarioConfig::warnings);

  py::class_<Popularity>(m, "Popularity")
    .def(py::init<std::vector<double>>(), py::arg("q"))
    .def("__len__", &Popularity::size)
    .def_property_readonly("q", [](const Popularity& p) {
      return std::vector<double>(p.values().begin(), p.values().end());
    });

  m.def("make_zipf", &make_zipf, py::arg("n_contents"), py::arg("gamma"));

  py::class_<Placement>(m, "Placement")
    .def(py::init<>())
    .def(py::init([](std::vector<double> p_h, std::vector<double> p_ue) {
           return Placement{std::move(p_h), std::move(p_ue)};
         }),
         py::arg("p_h"), py::arg("p_ue"))
    .def_readwrite("p_h", &Placement::p_h)
    .def_readwrite("p_ue", &Placement::p_ue)
    .def("feasible", &Placement::feasible, py::arg("cfg"), py::arg("tol") = 1e-9);

  py::enum_<ReportKind>(m, "ReportKind")
    .value("analytic", ReportKind::analytic)
    .value("empirical", ReportKind::empirical);

  py::class_<OffloadReport>(m, "OffloadReport")
    .def_readonly("per_content", &OffloadReport::per_content)
    .def_readonly("total", &OffloadReport::total)
    .def_readonly("kind", &OffloadReport::kind)
    .def_readonly("ci_halfwidth", &OffloadReport::ci_halfwidth)
    .def_readonly("n_trials", &OffloadReport::n_trials);

  py::class_<ValueAndGradient>(m, "ValueAndGradient")
    .def_readonly("value", &ValueAndGradient::value)
    .def_readonly("grad_h", &ValueAndGradient::grad_h)
    .def_readonly("grad_ue", &ValueAndGradient::grad_ue);

  m.def("offload_per_content", &offload_per_content, py::arg("cfg"), py::arg("placement"),
        py::arg("index"));
  m.def("total_offload", &total_offload, py::arg("cfg"), py::arg("q"), py::arg("placement"));
  m.def("objective_and_gradient",
        py::overload_cast<const ScenarioConfig&, const Popularity&, const Placement&>(
          &objective_and_gradient),
        py::arg("cfg"), py::arg("q"), py::arg("placement"));

  m.def(
    "project",
    [](std::vector<double> v, double budget) {
      return project(CappedSimplex(v.size(), budget), v);
    },
    py::arg("v"), py::arg("budget"), "Euclidean projection onto {0 <= p <= 1, sum p <= budget}");

  py::class_<DcSettings>(m, "DcSettings")
    .def(py::init<>())
    .def_readwrite("epsilon", &DcSettings::epsilon)
    .def_readwrite("max_outer_iters", &DcSettings::max_outer_iters)
    .def_readwrite("inner_tol", &DcSettings::inner_tol)
    .def_readwrite("inner_max_iters", &DcSettings::inner_max_iters)
    .def_readwrite("convexifier_scale", &DcSettings::convexifier_scale)
    .def_readwrite("max_convexifier_scale", &DcSettings::max_convexifier_scale);

  py::class_<DcResult>(m, "DcResult")
    .def_readonly("placement", &DcResult::placement)
    .def_property_readonly("converged", [](const DcResult& r) { return r.trace.converged; })
    .def_property_readonly("reason", [](const DcResult& r) { return std::string(to_string(r.trace.reason)); })
    .def_property_readonly("objectives", [](const DcResult& r) {
      std::vector<double> f;
      for (const auto& it : r.trace.iterates)
        f.push_back(it.objective);
      return f;
    })
    .def_property_readonly("outer_iterations", [](const DcResult& r) { return r.trace.outer_iterations(); });

  m.def("dc_optimize", &dc_optimize, py::arg("cfg"), py::arg("q"), py::arg("settings") = DcSettings{},
        py::arg("init") = std::nullopt);
  m.def("convexifier_h", &convexifier_h, py::arg("cfg"), py::arg("q"), py::arg("placement"),
        py::arg("scale") = 1.0);

  py::class_<WaterfillSolution>(m, "WaterfillSolution")
    .def_readonly("p_h", &WaterfillSolution::p_h)
    .def_readonly("beta", &WaterfillSolution::beta)
    .def_readonly("saturated", &WaterfillSolution::saturated)
    .def_readonly("dry", &WaterfillSolution::dry);
  m.def("waterfill", &waterfill, py::arg("cfg"), py::arg("q"));

  py::class_<UserTierSolution>(m, "UserTierSolution")
    .def_readonly("placement", &UserTierSolution::placement)
    .def_readonly("multiplier", &UserTierSolution::multiplier)
    .def_readonly("degenerate", &UserTierSolution::degenerate);
  m.def("usertier_solve", &usertier_solve, py::arg("cfg"), py::arg("q"));

  m.def("popular_cache", &popular_cache, py::arg("cfg"));
  m.def("even_cache", &even_cache, py::arg("cfg"));
  m.def(
    "non_joint", [](const ScenarioConfig& cfg, const Popularity& q) { return non_joint(cfg, q).placement; },
    py::arg("cfg"), py::arg("q"));

  py::enum_<CacheMode>(m, "CacheMode")
    .value("independent", CacheMode::independent)
    .value("capacity_exact", CacheMode::capacity_exact);

  py::class_<SimSettings>(m, "SimSettings")
    .def(py::init<>())
    .def_readwrite("region_radius", &SimSettings::region_radius)
    .def_readwrite("n_trials", &SimSettings::n_trials)
    .def_readwrite("rng_seed", &SimSettings::rng_seed)
    .def_readwrite("cache_mode", &SimSettings::cache_mode);

  m.def("simulate_offloading", &simulate_offloading, py::arg("cfg"), py::arg("q"), py::arg("placement"),
        py::arg("sim"));

  m.def(
    "sweep",
    [](const std::string& parameter, const std::string& grid, const std::string& schemes, const std::string& config,
       bool validate, long long trials) {
      Experiment exp = config.empty() ? Experiment{} : load_experiment(config);
      if (trials > 0)
        exp.sim.n_trials = trials;
      SweepSpec spec;
      spec.parameter = parse_sweep_parameter(parameter);
      spec.grid = parse_grid(grid);
      spec.schemes = parse_schemes(schemes);
      spec.validate = validate;
      std::ostringstream csv;
      write_sweep_csv(csv, run_sweep(exp, spec));
      return csv.str();
    },
    py::arg("parameter"), py::arg("grid"), py::arg("schemes") = "dc,popular,even,nonjoint",
    py::arg("config") = "", py::arg("validate") = false, py::arg("trials") = 0,
    "Runs a parameter sweep and returns the CSV text the command-line tool writes");
}
