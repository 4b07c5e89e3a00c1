#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "cvqb/circuit_model.hpp"
#include "cvqb/dynamics.hpp"
#include "cvqb/errors.hpp"
#include "cvqb/fock_oracle.hpp"
#include "cvqb/gaussian.hpp"
#include "cvqb/spectral.hpp"
#include "cvqb/sweeps.hpp"

namespace py = pybind11;
using namespace cvqb;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Trajectory as plain arrays: times (n), means (n, 4), cov (n, 4, 4) and one column per
// observable, with NaN where R is undefined.
py::dict trajectory_to_dict(const Trajectory& t) {
  const auto n = static_cast<py::ssize_t>(t.size());
  py::array_t<double> times(n);
  py::array_t<double> means({n, py::ssize_t{4}});
  py::array_t<double> cov({n, py::ssize_t{4}, py::ssize_t{4}});
  auto tm = times.mutable_unchecked<1>();
  auto mm = means.mutable_unchecked<2>();
  auto cm = cov.mutable_unchecked<3>();
  const Field fields[] = {Field::E1, Field::E2, Field::Ee, Field::Ei, Field::R, Field::S, Field::C};
  std::vector<py::array_t<double>> cols;
  for (std::size_t k = 0; k < 7; ++k) cols.emplace_back(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    tm(i) = t.times[u];
    for (int a = 0; a < 4; ++a) {
      mm(i, a) = t.states[u].means(a);
      for (int b = 0; b < 4; ++b) cm(i, a, b) = t.states[u].cov(a, b);
    }
    for (std::size_t k = 0; k < 7; ++k) {
      cols[k].mutable_at(i) = field_value(t.obs[u], fields[k]).value_or(kNaN);
    }
  }
  py::dict d;
  d["t"] = times;
  d["means"] = means;
  d["cov"] = cov;
  for (std::size_t k = 0; k < 7; ++k) d[to_string(fields[k])] = cols[k];
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian-state engine for a continuous-variable quantum battery";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnphysicalStateError>(m, "UnphysicalStateError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  py::class_<HamiltonianParams>(m, "HamiltonianParams")
      .def(py::init<>())
      .def(py::init([](double w1, double w2, double g, double G) {
             return HamiltonianParams{w1, w2, g, G};
           }),
           py::arg("omega1"), py::arg("omega2"), py::arg("g"), py::arg("G"))
      .def_readwrite("omega1", &HamiltonianParams::omega1)
      .def_readwrite("omega2", &HamiltonianParams::omega2)
      .def_readwrite("g", &HamiltonianParams::g)
      .def_readwrite("G", &HamiltonianParams::G)
      .def("__repr__", [](const HamiltonianParams& h) {
        return "HamiltonianParams(omega1=" + std::to_string(h.omega1) +
               ", omega2=" + std::to_string(h.omega2) + ", g=" + std::to_string(h.g) +
               ", G=" + std::to_string(h.G) + ")";
      });

  py::enum_<CouplingClass>(m, "CouplingClass")
      .value("Uncoupled", CouplingClass::Uncoupled)
      .value("RotatingOnly", CouplingClass::RotatingOnly)
      .value("CounterRotatingOnly", CouplingClass::CounterRotatingOnly)
      .value("Mixed", CouplingClass::Mixed);

  m.def("hamiltonian_from_lc",
        [](double L1, double L2, double C1, double C2, double kL, double kC) {
          return hamiltonian_from_lc({L1, L2, C1, C2, kL, kC});
        },
        py::arg("L1"), py::arg("L2"), py::arg("C1"), py::arg("C2"), py::arg("kL"), py::arg("kC"));
  m.def("hamiltonian_from_frequencies", &hamiltonian_from_frequencies, py::arg("omega1"),
        py::arg("omega2"), py::arg("kL"), py::arg("kC"));
  m.def("hamiltonian_extrapolated", &hamiltonian_extrapolated, py::arg("omega1"),
        py::arg("omega2"), py::arg("kL"), py::arg("kC"));
  m.def("classify_coupling", &classify_coupling, py::arg("h"), py::arg("tol") = 1e-12);

  py::enum_<Mode>(m, "Mode").value("Charger", Mode::Charger).value("Battery", Mode::Battery);

  py::class_<SingleModeState>(m, "SingleModeState")
      .def(py::init<>())
      .def_readwrite("mean", &SingleModeState::mean)
      .def_readwrite("cov", &SingleModeState::cov);
  py::class_<GaussianState>(m, "GaussianState")
      .def(py::init<>())
      .def_readwrite("means", &GaussianState::means)
      .def_readwrite("cov", &GaussianState::cov);
  py::class_<Observables>(m, "Observables")
      .def_readonly("E1", &Observables::E1)
      .def_readonly("E2", &Observables::E2)
      .def_readonly("Ee", &Observables::Ee)
      .def_readonly("Ei", &Observables::Ei)
      .def_readonly("R", &Observables::R)
      .def_readonly("S", &Observables::S)
      .def_readonly("C", &Observables::C);

  m.def("vacuum_mode", &vacuum_mode);
  m.def("coherent_mode", &coherent_mode, py::arg("alpha"));
  m.def("thermal_mode", &thermal_mode, py::arg("n_p"));
  m.def("vacuum", &vacuum);
  m.def("product_state", &product_state, py::arg("charger"), py::arg("battery"));
  m.def("reduce", &reduce, py::arg("state"), py::arg("mode"));
  m.def("mean_photon", &mean_photon);
  m.def("mode_energy", &mode_energy, py::arg("s"), py::arg("omega"));
  m.def("symplectic_eigenvalue", &symplectic_eigenvalue);
  m.def("ergotropy", &ergotropy, py::arg("s"), py::arg("omega"));
  m.def("ergotropy_ratio", &ergotropy_ratio, py::arg("s"), py::arg("omega"));
  m.def("entropy", &entropy);
  m.def("coherence", &coherence);
  m.def("observables", &observables, py::arg("state"), py::arg("h"));

  py::enum_<Stability>(m, "Stability")
      .value("StableClosed", Stability::StableClosed)
      .value("StableOpen", Stability::StableOpen)
      .value("Unstable", Stability::Unstable);
  py::enum_<Field>(m, "Field")
      .value("E1", Field::E1)
      .value("E2", Field::E2)
      .value("Ee", Field::Ee)
      .value("Ei", Field::Ei)
      .value("R", Field::R)
      .value("S", Field::S)
      .value("C", Field::C);

  m.def("build_drift", [](const HamiltonianParams& h, double gamma) { return build_drift(h, gamma).A; },
        py::arg("h"), py::arg("gamma") = 0.0);
  m.def("build_diffusion", [](double gamma, double n_th) { return build_diffusion(gamma, n_th).D; },
        py::arg("gamma"), py::arg("n_th"));
  m.def("stability_check",
        [](const HamiltonianParams& h, double gamma) { return stability_check(build_drift(h, gamma)); },
        py::arg("h"), py::arg("gamma") = 0.0);
  m.def("steady_state",
        [](const HamiltonianParams& h, double gamma, double n_th) {
          return steady_state(build_drift(h, gamma), build_diffusion(gamma, n_th));
        },
        py::arg("h"), py::arg("gamma"), py::arg("n_th"));
  m.def("uniform_grid", &uniform_grid, py::arg("tmax"), py::arg("dt"));
  m.def("propagate",
        [](const HamiltonianParams& h, const GaussianState& initial, const std::vector<double>& times,
           double gamma, double n_th, const std::string& method) {
          PropagateOptions opts;
          if (method == "numeric") {
            opts.method = Method::Numeric;
          } else if (method != "exact") {
            throw DomainError("method must be 'exact' or 'numeric'");
          }
          Trajectory t;
          {
            py::gil_scoped_release release;
            t = propagate({h, gamma, n_th, times}, initial, opts);
          }
          return trajectory_to_dict(t);
        },
        py::arg("h"), py::arg("initial"), py::arg("times"), py::arg("gamma") = 0.0,
        py::arg("n_th") = 0.0, py::arg("method") = "exact");
  m.def("max_over_window",
        [](const HamiltonianParams& h, const GaussianState& initial, const std::vector<double>& times,
           Field field) {
          const WindowMax w = max_over_window(propagate({h, 0.0, 0.0, times}, initial), field);
          return py::make_tuple(w.value, w.time);
        },
        py::arg("h"), py::arg("initial"), py::arg("times"), py::arg("field"));

  m.def("dominant_frequencies",
        [](const std::vector<double>& t, const std::vector<double>& v, int count) {
          const FrequencyReport r = dominant_frequencies(t, v, count);
          py::dict d;
          py::list tones;
          for (const Tone& tone : r.tones) tones.append(py::make_tuple(tone.frequency, tone.amplitude));
          d["tones"] = tones;
          if (r.beat) {
            d["half_difference"] = r.beat->half_difference;
            d["half_sum"] = r.beat->half_sum;
            d["difference"] = r.beat->difference;
            d["sum"] = r.beat->sum;
          }
          return d;
        },
        py::arg("times"), py::arg("values"), py::arg("count") = 2);

  py::enum_<ChargerKind>(m, "ChargerKind")
      .value("Coherent", ChargerKind::Coherent)
      .value("Thermal", ChargerKind::Thermal);
  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("kL_grid", &SweepSpec::kL_grid)
      .def_readwrite("kC_grid", &SweepSpec::kC_grid)
      .def_readwrite("n_p_grid", &SweepSpec::n_p_grid)
      .def_readwrite("omega1", &SweepSpec::omega1)
      .def_readwrite("omega2", &SweepSpec::omega2)
      .def_readwrite("tmax", &SweepSpec::tmax)
      .def_readwrite("dt", &SweepSpec::dt)
      .def_readwrite("charger", &SweepSpec::charger);
  m.def("run_sweep",
        [](const SweepSpec& spec, unsigned workers) {
          SweepResult r;
          {
            py::gil_scoped_release release;
            r = run_sweep(spec, workers);
          }
          py::list rows;
          for (const SweepCell& c : r.cells) {
            py::dict d;
            d["kl"] = c.kL;
            d["kc"] = c.kC;
            d["n_p"] = c.n_p;
            d["max_ee"] = c.max_ee;
            d["t_max_ee"] = c.t_max_ee;
            d["max_r"] = c.max_r;
            d["t_max_r"] = c.t_max_r;
            d["stable"] = c.stable;
            rows.append(d);
          }
          return rows;
        },
        py::arg("spec"), py::arg("workers") = 0);

  auto f = m.def_submodule("fock", "Truncated Fock-space oracle");
  py::class_<fock::FockDensityMatrix>(f, "FockDensityMatrix")
      .def_readonly("n1", &fock::FockDensityMatrix::n1)
      .def_readonly("n2", &fock::FockDensityMatrix::n2)
      .def_readonly("rho", &fock::FockDensityMatrix::rho);
  f.def("gaussian_to_fock", &fock::gaussian_to_fock, py::arg("s"), py::arg("levels"));
  f.def("tensor", &fock::tensor);
  f.def("partial_trace", &fock::partial_trace, py::arg("rho"), py::arg("keep"));
  f.def("mean_photon", &fock::mean_photon_fock);
  f.def("entropy", &fock::entropy_fock);
  f.def("ergotropy", &fock::ergotropy_fock, py::arg("rho"), py::arg("omega"));
  f.def("coherence", &fock::coherence_fock);
  f.def("thermal_relative_entropy", &fock::thermal_relative_entropy_fock);
  f.def("moments", &fock::moments);
  f.def("two_mode_moments", &fock::two_mode_moments);
  f.def("evolve",
        [](const HamiltonianParams& h, const fock::FockDensityMatrix& rho, double t, double gamma,
           double n_th) {
          py::gil_scoped_release release;
          return fock::evolve_fock(h, rho, t, gamma, n_th);
        },
        py::arg("h"), py::arg("rho"), py::arg("t"), py::arg("gamma") = 0.0, py::arg("n_th") = 0.0);
}
