#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <vector>

#include "cvqb/circuit_model.hpp"
#include "cvqb/gaussian.hpp"

namespace cvqb {

/// Linear generator of the first moments, d<R>/dt = A <R>, for R = (x1, p1, x2, p2).
/// gamma is kept alongside so stability can tell closed from open dynamics.
struct DriftMatrix {
  Mat4 A = Mat4::Zero();
  double gamma = 0.0;
};

/// Diffusion term of dsigma/dt = A sigma + sigma A^T + D.
struct DiffusionMatrix {
  Mat4 D = Mat4::Zero();
};

/// Symplectic form for ordering (x1, p1, x2, p2) with [x, p] = 2i (up to the factor 2).
[[nodiscard]] Mat4 symplectic_form();

/// Heisenberg equations of H = w1 (x1^2 + p1^2)/4 + w2 (x2^2 + p2^2)/4 + g x1 x2 - G p1 p2,
/// plus amplitude damping gamma/2 on the charger quadratures.
[[nodiscard]] DriftMatrix build_drift(const HamiltonianParams& h, double gamma);

/// gamma (2 n_th + 1) on the charger block, zero elsewhere.
[[nodiscard]] DiffusionMatrix build_diffusion(double gamma, double n_th);

struct EvolutionSpec {
  HamiltonianParams h;
  double gamma = 0.0;
  double n_th = 0.0;
  std::vector<double> times;

  /// Throws DomainError on negative rates or a non-increasing time grid.
  void validate() const;
};

/// 0, dt, 2 dt, ... up to tmax inclusive (tmax is snapped onto when within 1e-9 dt).
[[nodiscard]] std::vector<double> uniform_grid(double tmax, double dt);

enum class Stability { StableClosed, StableOpen, Unstable };

[[nodiscard]] const char* to_string(Stability s);

/// Closed (gamma = 0): stable iff every eigenvalue is purely imaginary and A is
/// diagonalizable. Open: stable iff every eigenvalue has a negative real part.
[[nodiscard]] Stability stability_check(const DriftMatrix& drift);

/// Closed-form moment propagator from the eigendecomposition of A. The eigenvalues of A
/// are the roots of its quartic characteristic polynomial.
class GaussianPropagator {
 public:
  GaussianPropagator(const DriftMatrix& drift, const DiffusionMatrix& diffusion);

  [[nodiscard]] bool diagonalizable() const { return diagonalizable_; }
  [[nodiscard]] const Eigen::Vector4cd& eigenvalues() const { return lambda_; }

  /// exp(A t). Requires diagonalizable().
  [[nodiscard]] Mat4 transfer(double t) const;
  /// Requires diagonalizable().
  [[nodiscard]] GaussianState evolve(const GaussianState& initial, double t) const;

 private:
  Eigen::Vector4cd lambda_;
  Eigen::Matrix4cd vecs_;
  Eigen::Matrix4cd inv_vecs_;
  Eigen::Matrix4cd noise_;  // V^-1 D V^-T
  bool has_noise_ = false;
  bool diagonalizable_ = false;
};

/// Fixed-step classical RK4 on the joint (means, cov) system.
class NumericPropagator {
 public:
  NumericPropagator(const DriftMatrix& drift, const DiffusionMatrix& diffusion, double dt = 1e-3);

  /// Advances the state by `duration` using ceil(duration / dt) equal substeps.
  [[nodiscard]] GaussianState advance(const GaussianState& state, double duration) const;

 private:
  Mat4 a_;
  Mat4 d_;
  double dt_;
};

enum class Method { Exact, Numeric };

struct PropagateOptions {
  Method method = Method::Exact;
  double numeric_dt = 1e-3;
  /// Any |cov| entry above this aborts with DivergenceError.
  double divergence_bound = 1e12;
};

struct Trajectory {
  HamiltonianParams h;
  double gamma = 0.0;
  std::vector<double> times;
  std::vector<GaussianState> states;
  std::vector<Observables> obs;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

/// Propagates `initial` over spec.times. Method::Exact falls back to the numeric
/// integrator when A is not diagonalizable.
[[nodiscard]] Trajectory propagate(const EvolutionSpec& spec, const GaussianState& initial,
                                   const PropagateOptions& opts = {});

/// Solves A sigma + sigma A^T + D = 0. Throws DomainError unless the drift is StableOpen.
[[nodiscard]] GaussianState steady_state(const DriftMatrix& drift,
                                         const DiffusionMatrix& diffusion);

enum class Field { E1, E2, Ee, Ei, R, S, C };

[[nodiscard]] std::optional<double> field_value(const Observables& o, Field f);
[[nodiscard]] const char* to_string(Field f);

struct WindowMax {
  double value = 0.0;
  double time = 0.0;
};

/// Largest defined sample of `field`; ties go to the earliest time.
[[nodiscard]] WindowMax max_over_window(const Trajectory& traj, Field field);

/// Where the battery's energy came from at each sample, as fractions of its gain.
struct EnergySources {
  std::optional<double> charger;
  std::optional<double> interaction;
};

/// charger = (E1(0) - E1(t)) / dE2, interaction = (Ei(0) - Ei(t)) / dE2 with
/// dE2 = E2(t) - E2(0); both undefined while dE2 <= 1e-12. Closed systems only.
[[nodiscard]] std::vector<EnergySources> energy_bookkeeping(const Trajectory& traj);

}  // namespace cvqb
