#include "cvqb/circuit_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvqb/errors.hpp"

namespace cvqb {

namespace {

void require_coupling(double k, const char* name) {
  if (!std::isfinite(k) || std::abs(k) >= 1.0) {
    throw DomainError(std::string(name) + " must lie in (-1, 1), got " + std::to_string(k));
  }
}

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw DomainError(std::string(name) + " must be positive, got " + std::to_string(v));
  }
}

// Shared by both energy evaluators: the two expressions have identical structure.
double coupled_quadratic_energy(double u1, double u2, double s1, double s2, double sm,
                                const char* what) {
  const double det = s1 * s2 - sm * sm;
  if (!(det > 0.0)) {
    throw DomainError(std::string(what) + ": singular coupling, self terms product must exceed "
                      "mutual term squared");
  }
  return (s1 * u2 * u2) / (2.0 * det) + (s2 * u1 * u1) / (2.0 * det) - (sm * u1 * u2) / det;
}

}  // namespace

std::string_view to_string(CouplingClass c) {
  switch (c) {
    case CouplingClass::Uncoupled:
      return "uncoupled";
    case CouplingClass::RotatingOnly:
      return "rotating-only";
    case CouplingClass::CounterRotatingOnly:
      return "counter-rotating-only";
    case CouplingClass::Mixed:
      return "mixed";
  }
  return "unknown";
}

HamiltonianParams hamiltonian_from_frequencies(double omega1, double omega2, double kL,
                                               double kC) {
  require_positive(omega1, "omega1");
  require_positive(omega2, "omega2");
  require_coupling(kL, "kL");
  require_coupling(kC, "kC");
  return hamiltonian_extrapolated(omega1, omega2, kL, kC);
}

HamiltonianParams hamiltonian_extrapolated(double omega1, double omega2, double kL, double kC) {
  require_positive(omega1, "omega1");
  require_positive(omega2, "omega2");
  if (!std::isfinite(kL) || !std::isfinite(kC)) throw DomainError("coupling must be finite");
  const double s = std::sqrt(omega1 * omega2);
  return HamiltonianParams{omega1, omega2, -kL * s / 2.0, kC * s / 2.0};
}

HamiltonianParams hamiltonian_from_lc(const CircuitParams& p) {
  require_positive(p.L1, "L1");
  require_positive(p.L2, "L2");
  require_positive(p.C1, "C1");
  require_positive(p.C2, "C2");
  require_coupling(p.kL, "kL");
  require_coupling(p.kC, "kC");
  const double shrink = (1.0 - p.kC * p.kC) * (1.0 - p.kL * p.kL);
  const double w1 = 1.0 / std::sqrt(p.L1 * p.C1 * shrink);
  const double w2 = 1.0 / std::sqrt(p.L2 * p.C2 * shrink);
  return hamiltonian_from_frequencies(w1, w2, p.kL, p.kC);
}

CouplingClass classify_coupling(const HamiltonianParams& h, double tol) {
  if (!(tol > 0.0)) throw DomainError("classification tolerance must be positive");
  const double scale = std::max(std::abs(h.g), std::abs(h.G));
  if (scale <= tol) return CouplingClass::Uncoupled;
  const bool no_counter = std::abs(h.counter_rotating_strength()) <= tol * scale;
  const bool no_rotating = std::abs(h.rotating_strength()) <= tol * scale;
  if (no_counter) return CouplingClass::RotatingOnly;
  if (no_rotating) return CouplingClass::CounterRotatingOnly;
  return CouplingClass::Mixed;
}

double classical_magnetic_energy(double phi1, double phi2, double L1, double L2, double Lm) {
  return coupled_quadratic_energy(phi1, phi2, L1, L2, Lm, "classical_magnetic_energy");
}

double classical_electric_energy(double q1, double q2, double C1, double C2, double Cm) {
  return coupled_quadratic_energy(q1, q2, C1, C2, Cm, "classical_electric_energy");
}

}  // namespace cvqb
