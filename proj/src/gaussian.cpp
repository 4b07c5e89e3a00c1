#include "cvqb/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvqb/errors.hpp"

namespace cvqb {

SingleModeState vacuum_mode() { return {}; }

SingleModeState coherent_mode(std::complex<double> alpha) {
  SingleModeState s;
  s.mean << 2.0 * alpha.real(), 2.0 * alpha.imag();
  return s;
}

SingleModeState thermal_mode(double n_p) {
  if (!std::isfinite(n_p) || n_p < 0.0) {
    throw DomainError("thermal photon number must be non-negative");
  }
  SingleModeState s;
  s.cov = (2.0 * n_p + 1.0) * Mat2::Identity();
  return s;
}

GaussianState vacuum() { return {}; }

GaussianState product_state(const SingleModeState& charger, const SingleModeState& battery) {
  GaussianState st;
  st.means.head<2>() = charger.mean;
  st.means.tail<2>() = battery.mean;
  st.cov.setZero();
  st.cov.topLeftCorner<2, 2>() = charger.cov;
  st.cov.bottomRightCorner<2, 2>() = battery.cov;
  return st;
}

SingleModeState reduce(const GaussianState& state, Mode mode) {
  const int off = mode == Mode::Charger ? 0 : 2;
  SingleModeState s;
  s.mean = state.means.segment<2>(off);
  s.cov = state.cov.block<2, 2>(off, off);
  return s;
}

std::array<double, 2> symplectic_spectrum(const GaussianState& state) {
  // K = sigma^1/2 Omega sigma^1/2 is antisymmetric with eigenvalues +-i nu_k, so -K^2 is
  // symmetric with nu_k^2 twice each. Symmetric eigenvalues stay accurate at nu = 1, where
  // the closed-form invariants lose half their digits.
  Eigen::SelfAdjointEigenSolver<Mat4> es(state.cov);
  const Vec4 root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat4 half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  const Mat4 k = half * omega * half;
  const Mat4 sq = -(k * k);
  const Vec4 nu2 = Eigen::SelfAdjointEigenSolver<Mat4>(0.5 * (sq + sq.transpose()),
                                                       Eigen::EigenvaluesOnly)
                       .eigenvalues();
  const double lo = std::sqrt(std::max(0.0, 0.5 * (nu2(0) + nu2(1))));
  const double hi = std::sqrt(std::max(0.0, 0.5 * (nu2(2) + nu2(3))));
  return {lo, hi};
}

void check_physical(const GaussianState& state) {
  const double scale = std::max(1.0, state.cov.cwiseAbs().maxCoeff());
  if ((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw UnphysicalStateError("covariance matrix is not symmetric");
  }
  const auto nu = symplectic_spectrum(state);
  if (nu[0] < 1.0 - kPuritySlack) {
    std::ostringstream os;
    os << "covariance violates the uncertainty bound (nu_min = " << nu[0] << ")";
    throw UnphysicalStateError(os.str());
  }
}

double mean_photon(const SingleModeState& s) {
  return (s.cov(0, 0) + s.cov(1, 1) + s.mean.squaredNorm() - 2.0) / 4.0;
}

double mode_energy(const SingleModeState& s, double omega) { return omega * mean_photon(s); }

double interaction_energy(const GaussianState& state, const HamiltonianParams& h) {
  const auto& m = state.means;
  const double xx = state.cov(0, 2) + m(0) * m(2);
  const double pp = state.cov(1, 3) + m(1) * m(3);
  return h.g * xx - h.G * pp;
}

double symplectic_eigenvalue(const SingleModeState& s) {
  const double det = s.cov.determinant();
  const double nu = det > 0.0 ? std::sqrt(det) : 0.0;
  if (std::abs(nu - 1.0) <= kPuritySlack) return 1.0;
  if (nu > 1.0) return nu;
  std::ostringstream os;
  os << "single-mode covariance violates the uncertainty bound (nu = " << nu << ")";
  throw UnphysicalStateError(os.str());
}

double passive_energy(const SingleModeState& s, double omega) {
  return omega * (symplectic_eigenvalue(s) - 1.0) / 2.0;
}

double ergotropy(const SingleModeState& s, double omega) {
  const double energy = mode_energy(s, omega);
  const double work = energy - passive_energy(s, omega);
  if (work >= 0.0) return work;
  // roundoff floor, scaled so large thermal energies do not trip it
  if (work >= -kPuritySlack * std::max(1.0, std::abs(energy))) return 0.0;
  throw UnphysicalStateError("negative ergotropy: state energy below its passive energy");
}

std::optional<double> ergotropy_ratio(const SingleModeState& s, double omega) {
  const double energy = mode_energy(s, omega);
  if (energy <= kEmptyBatteryEnergy) return std::nullopt;
  return ergotropy(s, omega) / energy;
}

double thermal_entropy(double n) {
  if (n <= 0.0) return 0.0;
  return (n + 1.0) * std::log1p(n) - n * std::log(n);
}

// A single-mode Gaussian state is unitarily a thermal state with n = (nu - 1) / 2.
double entropy(const SingleModeState& s) {
  return thermal_entropy((symplectic_eigenvalue(s) - 1.0) / 2.0);
}

double coherence(const SingleModeState& s) {
  const double n = mean_photon(s);
  if (n <= 0.0) return 0.0;
  const double c = thermal_entropy(n) - entropy(s);
  return std::max(0.0, c);
}

Observables observables(const GaussianState& state, const HamiltonianParams& h) {
  const SingleModeState charger = reduce(state, Mode::Charger);
  const SingleModeState battery = reduce(state, Mode::Battery);
  Observables o;
  o.E1 = mode_energy(charger, h.omega1);
  o.E2 = mode_energy(battery, h.omega2);
  o.Ee = ergotropy(battery, h.omega2);
  o.Ei = interaction_energy(state, h);
  if (o.E2 > kEmptyBatteryEnergy) o.R = o.Ee / o.E2;
  o.S = entropy(battery);
  o.C = coherence(battery);
  return o;
}

}  // namespace cvqb
