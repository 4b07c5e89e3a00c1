#pragma once

// Brute-force truncated Fock-space reference for the Gaussian engine. Slow and dense on
// purpose: every closed form in gaussian.hpp / dynamics.hpp has an independent route here.

#include <Eigen/Core>
#include <array>
#include <vector>

#include "cvqb/circuit_model.hpp"
#include "cvqb/gaussian.hpp"

namespace cvqb::fock {

using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Validity threshold for the population of the top retained level.
inline constexpr double kTailLimit = 1e-8;
/// evolve_* refuse to return states whose top level holds more than this.
inline constexpr double kOverflowLimit = 1e-6;

/// Single-mode ladder operators on levels 0..levels-1.
struct FockOperators {
  int levels = 0;
  RMatrix a;
  RMatrix adag;
  RMatrix number;
  RMatrix x;  // a + a^+
  CMatrix p;  // i (a^+ - a)
};

[[nodiscard]] FockOperators make_operators(int levels);

/// Density matrix on n1 (x n2) levels; basis index i1 * n2 + i2. Single mode when n2 == 1.
struct FockDensityMatrix {
  CMatrix rho;
  int n1 = 0;
  int n2 = 1;

  [[nodiscard]] int dim() const { return n1 * n2; }
};

struct WilliamsonForm {
  double nu = 1.0;   // symplectic eigenvalue
  double r = 0.0;    // squeezing, >= 0
  double phi = 0.0;  // orientation of the stretched axis, in [0, pi)
};

/// cov = nu * R(phi) diag(e^{2r}, e^{-2r}) R(phi)^T. Throws UnphysicalStateError for nu < 1.
[[nodiscard]] WilliamsonForm williamson_1mode(const Mat2& cov);

/// Displaced squeezed thermal state with the given moments. Built on a padded working
/// space and cut to `levels`; throws TruncationError if the discarded mass reaches kTailLimit.
[[nodiscard]] FockDensityMatrix gaussian_to_fock(const SingleModeState& s, int levels);

[[nodiscard]] FockDensityMatrix tensor(const FockDensityMatrix& charger,
                                       const FockDensityMatrix& battery);
[[nodiscard]] FockDensityMatrix partial_trace(const FockDensityMatrix& rho, Mode keep);

/// tr(rho (A (x) B)) for a two-mode rho.
[[nodiscard]] std::complex<double> expectation(const FockDensityMatrix& rho, const CMatrix& a,
                                               const CMatrix& b);

/// Population of the highest retained level (max over modes for two-mode states).
[[nodiscard]] double top_occupation(const FockDensityMatrix& rho);

[[nodiscard]] SingleModeState moments(const FockDensityMatrix& single);
[[nodiscard]] GaussianState two_mode_moments(const FockDensityMatrix& rho);

[[nodiscard]] std::vector<double> spectrum_descending(const FockDensityMatrix& rho);
[[nodiscard]] double mean_photon_fock(const FockDensityMatrix& single);
[[nodiscard]] double entropy_fock(const FockDensityMatrix& rho);
/// E - sum_k (omega k) e_k with the spectrum e_k in descending order.
[[nodiscard]] double ergotropy_fock(const FockDensityMatrix& single, double omega);
/// S(diag rho) - S(rho), natural log.
[[nodiscard]] double coherence_fock(const FockDensityMatrix& single);
/// Relative entropy S(rho || tau) to the thermal state tau with the same mean photon number,
/// evaluated from the Fock spectrum and diagonal. This is the coherence measure restricted
/// to Gaussian incoherent references, and the oracle for gaussian.hpp's coherence().
[[nodiscard]] double thermal_relative_entropy_fock(const FockDensityMatrix& single);

/// Mixed two-mode state as a weighted set of pure states (cheap to push through U(t)).
struct FockEnsemble {
  int n1 = 0;
  int n2 = 1;
  std::vector<double> weights;
  std::vector<CVector> states;

  /// Spectral decomposition of charger (x) battery, dropping weights below `cutoff`.
  [[nodiscard]] static FockEnsemble from_product(const FockDensityMatrix& charger,
                                                 const FockDensityMatrix& battery,
                                                 double cutoff = 1e-16);

  [[nodiscard]] FockDensityMatrix to_density() const;
  [[nodiscard]] FockDensityMatrix reduced(Mode keep) const;
  [[nodiscard]] std::complex<double> expectation(const CMatrix& a, const CMatrix& b) const;
  [[nodiscard]] GaussianState moments() const;
};

/// Two-mode Hamiltonian H = w1 n1 + w2 n2 + g X1 X2 + G (a1^+ - a1)(a2^+ - a2) on the
/// truncated product space, diagonalized once per total-photon-parity sector.
class TwoModeFockSystem {
 public:
  TwoModeFockSystem(const HamiltonianParams& h, int n1, int n2);

  [[nodiscard]] int n1() const { return n1_; }
  [[nodiscard]] int n2() const { return n2_; }
  [[nodiscard]] const RMatrix& hamiltonian() const { return h_; }

  [[nodiscard]] CVector evolve(const CVector& psi, double t) const;
  [[nodiscard]] FockEnsemble evolve(const FockEnsemble& ens, double t) const;
  /// Closed evolution U rho U^+.
  [[nodiscard]] FockDensityMatrix evolve(const FockDensityMatrix& rho, double t) const;

  /// Master equation with thermal damping of the charger, fixed-step RK4.
  [[nodiscard]] FockDensityMatrix evolve_open(const FockDensityMatrix& rho, double t,
                                              double gamma, double n_th, double dt = 2e-3) const;

 private:
  [[nodiscard]] CMatrix unitary(double t) const;

  HamiltonianParams params_;
  int n1_;
  int n2_;
  RMatrix h_;
  std::array<std::vector<int>, 2> sector_index_;
  std::array<RMatrix, 2> sector_vecs_;
  std::array<Eigen::VectorXd, 2> sector_vals_;
};

/// One-shot closed (gamma = 0) or open evolution of a two-mode density matrix.
[[nodiscard]] FockDensityMatrix evolve_fock(const HamiltonianParams& h,
                                            const FockDensityMatrix& initial, double t,
                                            double gamma = 0.0, double n_th = 0.0);

}  // namespace cvqb::fock
