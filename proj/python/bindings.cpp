#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regmom/csv_io.hpp"
#include "regmom/dvm.hpp"
#include "regmom/fv_solver.hpp"
#include "regmom/hermite.hpp"
#include "regmom/maxwell_iter.hpp"
#include "regmom/reference.hpp"
#include "regmom/scenarios.hpp"

namespace py = pybind11;
using namespace regmom;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict profile_dict(const Profile& p)
{
  py::dict d;
  d["x"] = to_array(p.x);
  d["rho"] = to_array(p.rho);
  d["u1"] = to_array(p.u1);
  d["theta"] = to_array(p.theta);
  d["sigma11"] = to_array(p.sigma11);
  d["q1"] = to_array(p.q1);
  return d;
}

py::dict table_dict(const Table& t)
{
  py::dict d;
  for (std::size_t c = 0; c < t.columns.size(); ++c) d[py::str(t.columns[c])] = to_array(t.data[c]);
  return d;
}

Table dict_table(const py::dict& d)
{
  Table t;
  for (auto [k, v] : d) {
    // scalar entries such as "t" are metadata, not columns
    if (!py::isinstance<py::sequence>(v) && !py::isinstance<py::array>(v)) continue;
    t.add_column(py::cast<std::string>(k), py::cast<std::vector<double>>(v));
  }
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Regularized moment method for the 1D Boltzmann-BGK equation";

  py::class_<MultiIndex>(m, "MultiIndex")
      .def(py::init([](std::vector<int> c) {
        MultiIndex a(static_cast<int>(c.size()));
        for (std::size_t d = 0; d < c.size(); ++d) a[static_cast<int>(d)] = c[d];
        return a;
      }))
      .def_property_readonly("dim", &MultiIndex::dim)
      .def_property_readonly("order", &MultiIndex::order)
      .def("components", [](const MultiIndex& a) {
        std::vector<int> c;
        for (int d = 0; d < a.dim(); ++d) c.push_back(a[d]);
        return c;
      })
      .def("__eq__", [](const MultiIndex& a, const MultiIndex& b) { return a == b; })
      .def("__repr__", [](const MultiIndex& a) { return "MultiIndex" + a.str(); });

  py::class_<MomentLayout>(m, "MomentLayout")
      .def(py::init<int, int>(), py::arg("max_order"), py::arg("dim"))
      .def("__len__", &MomentLayout::size)
      .def("ordinal", &MomentLayout::ordinal)
      .def("unrank", &MomentLayout::unrank)
      .def_property_readonly("max_order", &MomentLayout::max_order)
      .def_property_readonly("dim", &MomentLayout::dim);

  m.def("enumerate", &enumerate, py::arg("order"), py::arg("dim"));
  m.def("he_eval", &he_eval, py::arg("n"), py::arg("x"));
  m.def("he_derivative", &he_derivative, py::arg("n"), py::arg("x"));
  m.def("he_max_root", &he_max_root, py::arg("n"));
  m.def(
      "gauss_hermite",
      [](int n) {
        const auto q = gauss_hermite(n);
        return py::make_tuple(to_array(q.nodes), to_array(q.weights));
      },
      py::arg("n") = kDefaultQuadratureNodes);

  py::class_<MacroState>(m, "MacroState")
      .def(py::init([](double rho, std::array<double, 3> u, double theta) { return MacroState{rho, u, theta}; }),
           py::arg("rho") = 1.0, py::arg("u") = std::array<double, 3>{0.0, 0.0, 0.0}, py::arg("theta") = 1.0)
      .def_readwrite("rho", &MacroState::rho)
      .def_readwrite("u", &MacroState::u)
      .def_readwrite("theta", &MacroState::theta);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readwrite("left", &Scenario::left)
      .def_readwrite("right", &Scenario::right)
      .def_readwrite("x_lo", &Scenario::x_lo)
      .def_readwrite("x_hi", &Scenario::x_hi)
      .def_readwrite("t_stop", &Scenario::t_stop)
      .def_readwrite("kn", &Scenario::kn)
      .def_readwrite("dim", &Scenario::dim)
      .def_readonly("mach", &Scenario::mach)
      .def_readonly("steady", &Scenario::steady);

  m.def("shock_tube", &shock_tube, py::arg("kn") = 0.02);
  m.def("shock_structure", &shock_structure, py::arg("mach"), py::arg("kn") = 1.0);
  m.def(
      "scenario_from_config", [](const std::map<std::string, std::string>& kv) { return scenario_from_config(kv); },
      py::arg("config"));
  m.def("normalize_density", &normalize_density, py::arg("rho"));
  m.def("relaxation_time", [](const std::string& model, double kn, double rho, double theta, double omega) {
    if (model != "kn-over-rho" && model != "vhs") throw py::value_error("model must be 'kn-over-rho' or 'vhs'");
    return tau(model == "vhs" ? TauModel::vhs(omega) : TauModel::kn_over_rho(), kn, rho, theta);
  }, py::arg("model"), py::arg("kn"), py::arg("rho"), py::arg("theta"), py::arg("omega") = 0.72);

  py::register_exception<BreakdownError>(m, "BreakdownError", PyExc_RuntimeError);

  m.def(
      "run",
      [](const Scenario& sc, int order, int cells, const std::string& closure, double cfl) {
        if (closure != "linear" && closure != "nonlinear") throw py::value_error("closure must be 'linear' or 'nonlinear'");
        auto cfg = config_for(sc, order, cells);
        cfg.closure = closure == "linear" ? ClosureVariant::Linear : ClosureVariant::Nonlinear;
        cfg.cfl = cfl;
        cfg.validate();
        FvSolver solver(cfg);
        auto s = initial_state(cfg, sc);
        {
          py::gil_scoped_release release;
          solver.run(s);
        }
        py::dict d = profile_dict(profile_of(s));
        d["t"] = s.t;
        d["steps"] = s.diag.steps;
        return d;
      },
      py::arg("scenario"), py::arg("M") = 3, py::arg("cells") = 200, py::arg("closure") = "linear",
      py::arg("cfl") = 0.95);

  m.def(
      "dvm_reference",
      [](const Scenario& sc, int cells, int velocities, double vmax, const std::string& cache_dir) {
        ReferenceResult r;
        {
          py::gil_scoped_release release;
          r = reference_profile(sc, cells, VelocityGrid(velocities, vmax), cache_dir);
        }
        return table_dict(r.profile);
      },
      py::arg("scenario"), py::arg("cells") = kReferenceCells, py::arg("velocities") = kReferenceVelocities,
      py::arg("vmax") = kReferenceVmax, py::arg("cache_dir") = "");

  m.def(
      "compare",
      [](const py::dict& a, const py::dict& b, const std::string& column) {
        const auto r = compare(dict_table(a), dict_table(b), column);
        py::dict d;
        d["l1"] = r.l1;
        d["linf"] = r.linf;
        d["rel_l1"] = r.rel_l1;
        d["points"] = r.points;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("column") = "rho");

  m.def("field_presets", &field_preset_names);
  m.def("predicted_exponent", &predicted_exponent, py::arg("alpha"));
  m.def(
      "magnitude_table",
      [](const std::string& preset, int dim, std::vector<double> taus, int iterations, int working_order, int jobs) {
        const auto field = field_preset(preset, dim);
        std::vector<MagnitudeEstimate> t;
        {
          py::gil_scoped_release release;
          t = magnitude_table(field, taus, iterations, working_order, jobs);
        }
        py::list rows;
        for (const auto& e : t) {
          std::vector<int> a;
          for (int d = 0; d < e.alpha.dim(); ++d) a.push_back(e.alpha[d]);
          rows.append(py::make_tuple(a, e.predicted, e.degenerate ? py::float_(NAN) : py::float_(e.measured),
                                     e.degenerate));
        }
        return rows;
      },
      py::arg("preset") = "generic", py::arg("dim") = 3, py::arg("taus") = tau_sweep(1e-3, 0.5, 4),
      py::arg("iterations") = 3, py::arg("working_order") = kDefaultWorkingOrder, py::arg("jobs") = 1);
}
