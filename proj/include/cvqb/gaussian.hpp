#pragma once

#include <Eigen/Core>
#include <array>
#include <complex>
#include <optional>

#include "cvqb/circuit_model.hpp"

namespace cvqb {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Quadratures x = a + a^+, p = i(a^+ - a), so [x, p] = 2i and the vacuum covariance is
// the identity. Phase-space ordering is (x1, p1, x2, p2); mode 1 is the charger.

enum class Mode { Charger = 0, Battery = 1 };

/// Purity slack: symplectic eigenvalues within kPuritySlack of 1 are snapped to 1.
inline constexpr double kPuritySlack = 1e-9;
/// Battery energies at or below this are treated as empty (ratio R undefined).
inline constexpr double kEmptyBatteryEnergy = 1e-12;

struct SingleModeState {
  Vec2 mean = Vec2::Zero();
  Mat2 cov = Mat2::Identity();
};

struct GaussianState {
  Vec4 means = Vec4::Zero();
  Mat4 cov = Mat4::Identity();
};

/// Per-time observables of the battery (mode 2) plus the charger and interaction energies.
struct Observables {
  double E1 = 0.0;
  double E2 = 0.0;
  double Ee = 0.0;
  double Ei = 0.0;
  std::optional<double> R;  // Ee / E2, undefined for an empty battery
  double S = 0.0;
  double C = 0.0;
};

[[nodiscard]] SingleModeState vacuum_mode();
[[nodiscard]] SingleModeState coherent_mode(std::complex<double> alpha);
/// Throws DomainError for n_p < 0.
[[nodiscard]] SingleModeState thermal_mode(double n_p);

[[nodiscard]] GaussianState vacuum();
[[nodiscard]] GaussianState product_state(const SingleModeState& charger,
                                          const SingleModeState& battery);

[[nodiscard]] SingleModeState reduce(const GaussianState& state, Mode mode);

/// Symplectic eigenvalues (nu_-, nu_+) of the full two-mode covariance, ascending.
[[nodiscard]] std::array<double, 2> symplectic_spectrum(const GaussianState& state);

/// Throws UnphysicalStateError if cov is asymmetric or violates the uncertainty bound.
void check_physical(const GaussianState& state);

[[nodiscard]] double mean_photon(const SingleModeState& s);
[[nodiscard]] double mode_energy(const SingleModeState& s, double omega);

/// <H_i> with H_i = g x1 x2 - G p1 p2.
[[nodiscard]] double interaction_energy(const GaussianState& state, const HamiltonianParams& h);

/// nu = sqrt(det cov). Values within kPuritySlack of 1 are snapped to 1; anything
/// lower throws UnphysicalStateError.
[[nodiscard]] double symplectic_eigenvalue(const SingleModeState& s);

/// Energy of the passive (thermal) state with the same spectrum: omega (nu - 1) / 2.
[[nodiscard]] double passive_energy(const SingleModeState& s, double omega);
[[nodiscard]] double ergotropy(const SingleModeState& s, double omega);
[[nodiscard]] std::optional<double> ergotropy_ratio(const SingleModeState& s, double omega);

/// Von Neumann entropy in nats.
[[nodiscard]] double entropy(const SingleModeState& s);
/// Entropy of a thermal state with mean photon number n, in nats.
[[nodiscard]] double thermal_entropy(double n);
/// Relative entropy of coherence: S_th(n) - S(s).
[[nodiscard]] double coherence(const SingleModeState& s);

[[nodiscard]] Observables observables(const GaussianState& state, const HamiltonianParams& h);

}  // namespace cvqb
