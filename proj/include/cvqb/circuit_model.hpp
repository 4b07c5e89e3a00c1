#pragma once

#include <string_view>

namespace cvqb {

/// Physical parameters of the two coupled LC circuits (circuit 1 = charger, 2 = battery).
struct CircuitParams {
  double L1 = 1.0;
  double L2 = 1.0;
  double C1 = 1.0;
  double C2 = 1.0;
  double kL = 0.0;  // magnetic coupling coefficient, L_m = kL * sqrt(L1 L2)
  double kC = 0.0;  // electric coupling coefficient, C_m = kC * sqrt(C1 C2)
};

/// Quantized two-mode Hamiltonian, in units hbar = 1:
///   H = w1 a1^+ a1 + w2 a2^+ a2 + g (a1^+ + a1)(a2^+ + a2) + G (a1^+ - a1)(a2^+ - a2)
/// Expanding the interaction, (g + G) multiplies the pair-creating terms a1^+ a2^+ + a1 a2
/// and (g - G) the excitation-exchanging terms a1^+ a2 + a1 a2^+.
struct HamiltonianParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double g = 0.0;
  double G = 0.0;

  [[nodiscard]] double rotating_strength() const { return g - G; }
  [[nodiscard]] double counter_rotating_strength() const { return g + G; }
};

enum class CouplingClass { Uncoupled, RotatingOnly, CounterRotatingOnly, Mixed };

[[nodiscard]] std::string_view to_string(CouplingClass c);

/// omega_j = [L_j C_j (1 - kC^2)(1 - kL^2)]^{-1/2}, g = -kL sqrt(w1 w2)/2, G = kC sqrt(w1 w2)/2.
/// Throws DomainError unless all L, C > 0 and |kL|, |kC| < 1.
[[nodiscard]] HamiltonianParams hamiltonian_from_lc(const CircuitParams& p);

/// Same coupling map as hamiltonian_from_lc, parameterized by the mode frequencies directly.
[[nodiscard]] HamiltonianParams hamiltonian_from_frequencies(double omega1, double omega2,
                                                             double kL, double kC);

/// Coupling map without the |k| < 1 bound, for probing the deep-strong-coupling regime
/// (|k| >= 1), where the classical circuit model breaks down. Frequencies must be positive.
[[nodiscard]] HamiltonianParams hamiltonian_extrapolated(double omega1, double omega2, double kL,
                                                         double kC);

/// Classifies which of the two coupling channels is present. Uncoupled when
/// max(|g|, |G|) <= tol; otherwise a channel counts as absent when its strength is
/// at most tol * max(|g|, |G|).
[[nodiscard]] CouplingClass classify_coupling(const HamiltonianParams& h, double tol = 1e-12);

/// Magnetic energy of two mutually coupled coils in terms of their fluxes.
[[nodiscard]] double classical_magnetic_energy(double phi1, double phi2, double L1, double L2,
                                               double Lm);

/// Electric energy of two coupled capacitors in terms of their charges.
[[nodiscard]] double classical_electric_energy(double q1, double q2, double C1, double C2,
                                               double Cm);

}  // namespace cvqb
