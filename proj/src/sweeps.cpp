#include "cvqb/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <ostream>
#include <stdexcept>
#include <thread>

#include "cvqb/circuit_model.hpp"
#include "cvqb/csv.hpp"
#include "cvqb/dynamics.hpp"
#include "cvqb/errors.hpp"
#include "cvqb/gaussian.hpp"

namespace cvqb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw DomainError(std::string(name) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw DomainError(std::string(name) + " has a non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw DomainError(std::string(name) + " must be strictly increasing");
    }
  }
}

std::string line_for(const SweepCell& c) {
  std::string s;
  s += format_number(c.kL) + ',' + format_number(c.kC) + ',' + format_number(c.n_p) + ',';
  s += format_number(c.max_ee) + ',' + format_number(c.t_max_ee) + ',';
  s += format_number(c.max_r) + ',' + format_number(c.t_max_r) + ',';
  s += c.stable ? '1' : '0';
  return s;
}

}  // namespace

const char* to_string(ChargerKind k) {
  return k == ChargerKind::Coherent ? "coherent" : "thermal";
}

void SweepSpec::validate() const {
  require_grid(kL_grid, "kL grid");
  require_grid(kC_grid, "kC grid");
  require_grid(n_p_grid, "n_p grid");
  const auto out_of_range = [](double k) { return std::abs(k) >= 1.0; };
  if (std::any_of(kL_grid.begin(), kL_grid.end(), out_of_range) ||
      std::any_of(kC_grid.begin(), kC_grid.end(), out_of_range)) {
    throw DomainError("coupling coefficients must lie in (-1, 1)");
  }
  if (n_p_grid.front() < 0.0) throw DomainError("n_p must be non-negative");
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw DomainError("frequencies must be positive");
  if (!(dt > 0.0) || !(tmax >= 0.0)) throw DomainError("time window must have tmax >= 0, dt > 0");
}

SweepCell run_cell(const SweepSpec& spec, double kL, double kC, double n_p) {
  SweepCell cell{kL, kC, n_p, kNaN, kNaN, kNaN, kNaN, false};
  const HamiltonianParams h = hamiltonian_from_frequencies(spec.omega1, spec.omega2, kL, kC);
  if (stability_check(build_drift(h, 0.0)) == Stability::Unstable) return cell;

  const SingleModeState charger = spec.charger == ChargerKind::Thermal
                                      ? thermal_mode(n_p)
                                      : coherent_mode({std::sqrt(n_p), 0.0});
  EvolutionSpec evo{h, 0.0, 0.0, uniform_grid(spec.tmax, spec.dt)};
  Trajectory traj;
  try {
    traj = propagate(evo, product_state(charger, vacuum_mode()));
  } catch (const DivergenceError&) {
    return cell;
  }
  cell.stable = true;
  const WindowMax ee = max_over_window(traj, Field::Ee);
  cell.max_ee = ee.value;
  cell.t_max_ee = ee.time;
  try {
    const WindowMax r = max_over_window(traj, Field::R);
    cell.max_r = r.value;
    cell.t_max_r = r.time;
  } catch (const std::invalid_argument&) {
    // battery never charged: R undefined everywhere
  }
  return cell;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  const std::size_t nc = spec.kC_grid.size();
  const std::size_t nn = spec.n_p_grid.size();
  const std::size_t total = spec.kL_grid.size() * nc * nn;

  SweepResult result;
  result.cells.resize(total);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto work = [&] {
    for (std::size_t i = next++; i < total && !failed; i = next++) {
      const std::size_t il = i / (nc * nn);
      const std::size_t ic = (i / nn) % nc;
      const std::size_t in = i % nn;
      try {
        result.cells[i] = run_cell(spec, spec.kL_grid[il], spec.kC_grid[ic], spec.n_p_grid[in]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << kSweepCsvHeader << '\n';
  for (const SweepCell& c : result.cells) os << line_for(c) << '\n';
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << kSweepCsvHeader << '\n';
  if (!out) throw std::runtime_error("write failed on " + path + " (header)");
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    out << line_for(result.cells[i]) << '\n';
    if (!out) {
      throw std::runtime_error("write failed on " + path + " at cell " + std::to_string(i) +
                               " (kl=" + format_number(result.cells[i].kL) +
                               ", kc=" + format_number(result.cells[i].kC) + ")");
    }
  }
}

std::string sweep_metadata_json(const SweepSpec& spec) {
  nlohmann::ordered_json j;
  j["kl_grid"] = spec.kL_grid;
  j["kc_grid"] = spec.kC_grid;
  j["n_p_grid"] = spec.n_p_grid;
  j["omega1"] = spec.omega1;
  j["omega2"] = spec.omega2;
  j["tmax"] = spec.tmax;
  j["dt"] = spec.dt;
  j["charger"] = to_string(spec.charger);
  j["battery"] = "vacuum";
  j["gamma"] = 0.0;
  j["cells"] = spec.kL_grid.size() * spec.kC_grid.size() * spec.n_p_grid.size();
  j["order"] = "row-major: kl, kc, n_p";
  j["units"] = "hbar = 1, omega1 = 1; energies in hbar*omega1, times in 1/omega1";
  return j.dump(2) + "\n";
}

}  // namespace cvqb
