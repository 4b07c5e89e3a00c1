#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvqb/errors.hpp"
#include "cvqb/fock_oracle.hpp"

using namespace cvqb;
using namespace cvqb::fock;

namespace {

FockDensityMatrix pure(const CVector& psi) {
  FockDensityMatrix r;
  r.n1 = static_cast<int>(psi.size());
  r.rho = psi * psi.adjoint();
  return r;
}

FockDensityMatrix diagonal(std::initializer_list<double> probs) {
  FockDensityMatrix r;
  r.n1 = static_cast<int>(probs.size());
  r.rho = CMatrix::Zero(r.n1, r.n1);
  int k = 0;
  for (double p : probs) r.rho(k, k) = p, ++k;
  return r;
}

}  // namespace

TEST(FockOperators, CommutatorIsIdentityBelowTopLevel) {
  const FockOperators ops = make_operators(12);
  const RMatrix c = ops.a * ops.adag - ops.adag * ops.a;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) EXPECT_NEAR(c(i, j), i == j ? 1.0 : 0.0, 1e-14);
  }
  EXPECT_THROW((void)make_operators(1), std::invalid_argument);
}

TEST(FockOperators, QuadratureCommutator) {
  const FockOperators ops = make_operators(10);
  const CMatrix x = ops.x.cast<std::complex<double>>();
  const CMatrix c = x * ops.p - ops.p * x;
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(std::abs(c(i, i) - std::complex<double>(0, 2)), 0.0, 1e-13);
}

TEST(Williamson, Examples) {
  WilliamsonForm w = williamson_1mode(Mat2::Identity());
  EXPECT_NEAR(w.nu, 1.0, 1e-14);
  EXPECT_EQ(w.r, 0.0);
  EXPECT_EQ(w.phi, 0.0);

  w = williamson_1mode(9.0 * Mat2::Identity());
  EXPECT_NEAR(w.nu, 9.0, 1e-13);
  EXPECT_EQ(w.r, 0.0);

  Mat2 sq;
  sq << 8.15485, 0.0, 0.0, 1.10364;
  w = williamson_1mode(sq);
  EXPECT_NEAR(w.nu, 3.0, 1e-5);
  EXPECT_NEAR(w.r, 0.5, 1e-5);
  EXPECT_NEAR(w.phi, 0.0, 1e-12);

  Mat2 bad;
  bad << 0.5, 0.0, 0.0, 0.5;
  EXPECT_THROW((void)williamson_1mode(bad), UnphysicalStateError);
}

TEST(Williamson, RotatedAxis) {
  const double phi = 0.7;
  Mat2 rot;
  rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  const Mat2 cov = 2.0 * rot * Eigen::Vector2d(std::exp(0.6), std::exp(-0.6)).asDiagonal() *
                   rot.transpose();
  const WilliamsonForm w = williamson_1mode(cov);
  EXPECT_NEAR(w.nu, 2.0, 1e-12);
  EXPECT_NEAR(w.r, 0.3, 1e-12);
  EXPECT_NEAR(w.phi, phi, 1e-12);
}

TEST(GaussianToFock, ThermalIsGeometric) {
  const FockDensityMatrix r = gaussian_to_fock(thermal_mode(4.0), 100);
  EXPECT_NEAR(r.rho(0, 0).real(), 0.2, 1e-9);
  for (int n = 1; n < 10; ++n) {
    EXPECT_NEAR(r.rho(n, n).real(), std::pow(4.0, n) / std::pow(5.0, n + 1), 1e-9);
  }
  EXPECT_NEAR(std::abs(r.rho(0, 1)), 0.0, 1e-12);
}

TEST(GaussianToFock, CoherentIsPoisson) {
  const FockDensityMatrix r = gaussian_to_fock(coherent_mode({2.0, 0.0}), 40);
  EXPECT_NEAR(r.rho(4, 4).real(), std::exp(-4.0) * 256.0 / 24.0, 1e-9);
  EXPECT_NEAR(r.rho(4, 4).real(), 0.19537, 1e-5);
}

TEST(GaussianToFock, VacuumIsGroundState) {
  const FockDensityMatrix r = gaussian_to_fock(vacuum_mode(), 8);
  EXPECT_NEAR(r.rho(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR((r.rho - diagonal({1, 0, 0, 0, 0, 0, 0, 0}).rho).norm(), 0.0, 1e-14);
}

TEST(GaussianToFock, TailGate) {
  EXPECT_THROW((void)gaussian_to_fock(thermal_mode(4.0), 60), TruncationError);
}

TEST(GaussianToFock, MomentsRoundTrip) {
  const double phi = 1.1;
  Mat2 rot;
  rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  SingleModeState s;
  s.cov = 1.6 * rot * Eigen::Vector2d(std::exp(0.8), std::exp(-0.8)).asDiagonal() *
          rot.transpose();
  s.mean << 1.2, -0.7;
  const FockDensityMatrix r = gaussian_to_fock(s, 60);
  const SingleModeState back = moments(r);
  EXPECT_LT((back.mean - s.mean).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((back.cov - s.cov).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-12);
}

TEST(FockObservables, Ergotropy) {
  EXPECT_NEAR(ergotropy_fock(gaussian_to_fock(thermal_mode(1.0), 60), 1.0), 0.0, 1e-12);
  EXPECT_NEAR(ergotropy_fock(diagonal({0.0, 1.0, 0.0}), 1.0), 1.0, 1e-14);
  EXPECT_NEAR(ergotropy_fock(diagonal({0.0, 1.0, 0.0}), 2.5), 2.5, 1e-14);
  const FockDensityMatrix mixed = diagonal({0.3, 0.7});
  EXPECT_NEAR(mean_photon_fock(mixed), 0.7, 1e-15);
  EXPECT_NEAR(ergotropy_fock(mixed, 1.0), 0.4, 1e-14);
}

TEST(FockObservables, Coherence) {
  EXPECT_NEAR(coherence_fock(diagonal({0.5, 0.3, 0.2})), 0.0, 1e-14);
  CVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(coherence_fock(pure(plus)), std::log(2.0), 1e-12);
  // pure state: S(diag) is the Poisson entropy of mean 4
  const FockDensityMatrix coh = gaussian_to_fock(coherent_mode({2.0, 0.0}), 60);
  EXPECT_NEAR(coherence_fock(coh), 2.0866727, 1e-6);
  // relative entropy to the same-n thermal state is the Gaussian measure
  EXPECT_NEAR(thermal_relative_entropy_fock(coh), 5 * std::log(5.0) - 4 * std::log(4.0), 1e-6);
  EXPECT_NEAR(thermal_relative_entropy_fock(gaussian_to_fock(thermal_mode(2.0), 80)), 0.0, 1e-9);
}

TEST(FockObservables, ThermalEntropy) {
  const FockDensityMatrix th = gaussian_to_fock(thermal_mode(4.0), 120);
  EXPECT_NEAR(entropy_fock(th), 2.50201, 1e-5);
}

TEST(FockStates, PartialTraceOfProduct) {
  const FockDensityMatrix c = gaussian_to_fock(coherent_mode({0.5, 0.2}), 12);
  const FockDensityMatrix b = gaussian_to_fock(thermal_mode(0.3), 20);
  const FockDensityMatrix joint = tensor(c, b);
  EXPECT_EQ(joint.dim(), 240);
  EXPECT_NEAR((partial_trace(joint, Mode::Charger).rho - c.rho).norm(), 0.0, 1e-13);
  EXPECT_NEAR((partial_trace(joint, Mode::Battery).rho - b.rho).norm(), 0.0, 1e-13);

  const FockEnsemble ens = FockEnsemble::from_product(c, b);
  EXPECT_NEAR((ens.to_density().rho - joint.rho).norm(), 0.0, 1e-12);
  EXPECT_NEAR((ens.reduced(Mode::Charger).rho - c.rho).norm(), 0.0, 1e-12);
  EXPECT_NEAR((ens.reduced(Mode::Battery).rho - b.rho).norm(), 0.0, 1e-12);
  const GaussianState m1 = two_mode_moments(joint);
  const GaussianState m2 = ens.moments();
  EXPECT_LT((m1.cov - m2.cov).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((m1.means - m2.means).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(m1.means(0), 1.0, 1e-8);
  EXPECT_NEAR(m1.means(1), 0.4, 1e-8);
  EXPECT_NEAR(m1.cov(2, 2), 1.6, 1e-8);
}

TEST(EvolveFock, ZeroTimeIsIdentity) {
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.3, -0.57, 0.7);
  const FockDensityMatrix rho0 =
      tensor(gaussian_to_fock(coherent_mode({0.5, 0.0}), 10), gaussian_to_fock(vacuum_mode(), 10));
  const FockDensityMatrix same = evolve_fock(h, rho0, 0.0);
  EXPECT_EQ((same.rho - rho0.rho).norm(), 0.0);
}

TEST(EvolveFock, DecoupledKeepsPhotonDistributions) {
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.3, 0.0, 0.0);
  const FockDensityMatrix rho0 = tensor(gaussian_to_fock(coherent_mode({1.0, 0.5}), 20),
                                        gaussian_to_fock(thermal_mode(0.4), 24));
  const FockDensityMatrix r = evolve_fock(h, rho0, 3.7);
  for (int k = 0; k < r.dim(); ++k) EXPECT_NEAR(r.rho(k, k).real(), rho0.rho(k, k).real(), 1e-12);
}

TEST(EvolveFock, ClosedIsUnitary) {
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.3, -0.57, 0.7);
  const FockDensityMatrix rho0 = tensor(gaussian_to_fock(thermal_mode(0.3), 16),
                                        gaussian_to_fock(vacuum_mode(), 16));
  const FockDensityMatrix r = evolve_fock(h, rho0, 0.4);
  EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-9);
  EXPECT_NEAR((r.rho - r.rho.adjoint()).norm(), 0.0, 1e-9);
  const auto before = spectrum_descending(rho0);
  const auto after = spectrum_descending(r);
  for (std::size_t k = 0; k < 20; ++k) EXPECT_NEAR(before[k], after[k], 1e-9);
}

TEST(EvolveFock, OverflowIsReported) {
  // counter-rotating coupling pumps photons into both modes; 6 levels fill quickly
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.3, -0.7, 0.7);
  const FockDensityMatrix rho0 =
      tensor(gaussian_to_fock(coherent_mode({1.0, 0.0}), 12), gaussian_to_fock(vacuum_mode(), 6));
  EXPECT_THROW((void)evolve_fock(h, rho0, 3.0), TruncationError);
}

TEST(EvolveFock, OpenPreservesTraceAndHermiticity) {
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.3, -0.37, 0.7);
  const FockDensityMatrix rho0 =
      tensor(gaussian_to_fock(thermal_mode(0.2), 12), gaussian_to_fock(vacuum_mode(), 10));
  const FockDensityMatrix r = evolve_fock(h, rho0, 0.5, 0.1, 0.1);
  EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-9);
  EXPECT_NEAR((r.rho - r.rho.adjoint()).norm(), 0.0, 1e-9);
  EXPECT_GT(spectrum_descending(r).back(), -1e-10);
}

TEST(EvolveFock, OpenDecoupledThermalizes) {
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.3, 0.0, 0.0);
  const TwoModeFockSystem sys(h, 30, 2);
  const FockDensityMatrix rho0 =
      tensor(gaussian_to_fock(vacuum_mode(), 30), gaussian_to_fock(vacuum_mode(), 2));
  // gamma t = 20
  const FockDensityMatrix r = sys.evolve_open(rho0, 20.0, 1.0, 0.5, 5e-3);
  EXPECT_NEAR(mean_photon_fock(partial_trace(r, Mode::Charger)), 0.5, 1e-4);
  EXPECT_NEAR(mean_photon_fock(partial_trace(r, Mode::Battery)), 0.0, 1e-12);
}

TEST(EvolveFock, InputValidation) {
  const HamiltonianParams h = hamiltonian_from_frequencies(1.0, 1.0, 0.1, 0.1);
  const TwoModeFockSystem sys(h, 4, 4);
  const FockDensityMatrix wrong =
      tensor(gaussian_to_fock(vacuum_mode(), 5), gaussian_to_fock(vacuum_mode(), 4));
  EXPECT_THROW((void)sys.evolve(wrong, 1.0), std::invalid_argument);
  const FockDensityMatrix ok =
      tensor(gaussian_to_fock(vacuum_mode(), 4), gaussian_to_fock(vacuum_mode(), 4));
  EXPECT_THROW((void)sys.evolve_open(ok, 1.0, -1.0, 0.0), DomainError);
}
