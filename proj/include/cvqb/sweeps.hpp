#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvqb {

enum class ChargerKind { Coherent, Thermal };

[[nodiscard]] const char* to_string(ChargerKind k);

/// Grid of closed-system charging runs. Each cell starts from a vacuum battery and a
/// charger holding n_p mean photons: a thermal state, or a coherent state with real
/// amplitude sqrt(n_p).
struct SweepSpec {
  std::vector<double> kL_grid;
  std::vector<double> kC_grid;
  std::vector<double> n_p_grid;
  double omega1 = 1.0;
  double omega2 = 1.3;
  double tmax = 20.0;
  double dt = 0.01;
  ChargerKind charger = ChargerKind::Thermal;

  /// Throws DomainError for empty or non-increasing grids, |k| >= 1, or n_p < 0.
  void validate() const;
};

struct SweepCell {
  double kL = 0.0;
  double kC = 0.0;
  double n_p = 0.0;
  double max_ee = 0.0;  // NaN when unavailable
  double t_max_ee = 0.0;
  double max_r = 0.0;  // NaN when R is undefined over the whole window
  double t_max_r = 0.0;
  bool stable = true;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // row-major: kL outermost, then kC, then n_p
};

/// Runs one cell of the grid.
[[nodiscard]] SweepCell run_cell(const SweepSpec& spec, double kL, double kC, double n_p);

/// Evaluates every cell with `workers` threads (0 = hardware concurrency). The result is
/// independent of the worker count.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0);

inline constexpr const char* kSweepCsvHeader = "kl,kc,n_p,max_ee,t_max_ee,max_r,t_max_r,stable";

void write_sweep_csv(const SweepResult& result, std::ostream& os);
/// Writes to a file; I/O failures are reported with the offending cell index.
void write_sweep_csv(const SweepResult& result, const std::string& path);

/// JSON echo of the full spec, for the metadata sidecar.
[[nodiscard]] std::string sweep_metadata_json(const SweepSpec& spec);

}  // namespace cvqb
