#include "cvqb/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cvqb/errors.hpp"

namespace cvqb {

namespace {

constexpr double kConditionLimit = 1e10;

// (exp(mu t) - 1) / mu, continuous through mu = 0
std::complex<double> integrated_exponential(std::complex<double> mu, double t) {
  const std::complex<double> z = mu * t;
  if (std::abs(z) < 1e-5) {
    return t * (1.0 + z / 2.0 + z * z / 6.0);
  }
  return (std::exp(z) - 1.0) / mu;
}

double condition_estimate(const Eigen::Matrix4cd& v, const Eigen::Matrix4cd& vinv) {
  // induced 1-norms; good enough to flag defective eigenbases
  const auto norm1 = [](const Eigen::Matrix4cd& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
  };
  return norm1(v) * norm1(vinv);
}

void guard_divergence(const GaussianState& s, double t, double bound) {
  const double biggest = s.cov.cwiseAbs().maxCoeff();
  if (!std::isfinite(biggest) || !s.means.allFinite() || biggest > bound) {
    std::ostringstream os;
    os << "moments diverged at t = " << t
       << " (deep-strong-coupling regime: the coupled-mode Hamiltonian is not bounded below)";
    throw DivergenceError(os.str());
  }
}

}  // namespace

Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

DriftMatrix build_drift(const HamiltonianParams& h, double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw DomainError("gamma must be non-negative");
  DriftMatrix d;
  d.gamma = gamma;
  auto& a = d.A;
  // dx1/dt = w1 p1 - 2G p2,  dp1/dt = -w1 x1 - 2g x2
  // dx2/dt = w2 p2 - 2G p1,  dp2/dt = -w2 x2 - 2g x1
  a << 0.0, h.omega1, 0.0, -2.0 * h.G,
      -h.omega1, 0.0, -2.0 * h.g, 0.0,
      0.0, -2.0 * h.G, 0.0, h.omega2,
      -2.0 * h.g, 0.0, -h.omega2, 0.0;
  a(0, 0) = -gamma / 2.0;
  a(1, 1) = -gamma / 2.0;
  return d;
}

DiffusionMatrix build_diffusion(double gamma, double n_th) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw DomainError("gamma must be non-negative");
  if (!std::isfinite(n_th) || n_th < 0.0) throw DomainError("n_th must be non-negative");
  DiffusionMatrix d;
  d.D(0, 0) = gamma * (2.0 * n_th + 1.0);
  d.D(1, 1) = gamma * (2.0 * n_th + 1.0);
  return d;
}

void EvolutionSpec::validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0) throw DomainError("gamma must be non-negative");
  if (!std::isfinite(n_th) || n_th < 0.0) throw DomainError("n_th must be non-negative");
  if (!(h.omega1 > 0.0) || !(h.omega2 > 0.0)) throw DomainError("frequencies must be positive");
  if (times.empty()) throw DomainError("time grid is empty");
  if (times.front() < 0.0) throw DomainError("time grid must start at t >= 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("time grid must be strictly increasing");
  }
}

std::vector<double> uniform_grid(double tmax, double dt) {
  if (!std::isfinite(tmax) || tmax < 0.0) throw DomainError("tmax must be non-negative");
  if (!std::isfinite(dt) || dt <= 0.0) throw DomainError("dt must be positive");
  const double steps = tmax / dt;
  auto n = static_cast<std::size_t>(std::floor(steps + 1e-9));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * dt;
  if (std::abs(steps - std::round(steps)) <= 1e-9) t.back() = tmax;
  return t;
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::StableClosed:
      return "stable-closed";
    case Stability::StableOpen:
      return "stable-open";
    case Stability::Unstable:
      return "unstable";
  }
  return "unknown";
}

Stability stability_check(const DriftMatrix& drift) {
  Eigen::EigenSolver<Mat4> es(drift.A);
  const Eigen::Vector4cd lambda = es.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (drift.gamma == 0.0) {
    if (lambda.real().cwiseAbs().maxCoeff() > 1e-9 * scale) return Stability::Unstable;
    const Eigen::Matrix4cd v = es.eigenvectors();
    Eigen::FullPivLU<Eigen::Matrix4cd> lu(v);
    if (!lu.isInvertible()) return Stability::Unstable;
    if (condition_estimate(v, lu.inverse()) > kConditionLimit) return Stability::Unstable;
    return Stability::StableClosed;
  }
  return lambda.real().maxCoeff() < 0.0 ? Stability::StableOpen : Stability::Unstable;
}

GaussianPropagator::GaussianPropagator(const DriftMatrix& drift,
                                       const DiffusionMatrix& diffusion) {
  Eigen::EigenSolver<Mat4> es(drift.A);
  lambda_ = es.eigenvalues();
  vecs_ = es.eigenvectors();
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(vecs_);
  if (!lu.isInvertible()) return;
  inv_vecs_ = lu.inverse();
  if (condition_estimate(vecs_, inv_vecs_) > kConditionLimit) return;
  diagonalizable_ = true;
  has_noise_ = diffusion.D.cwiseAbs().maxCoeff() > 0.0;
  if (has_noise_) {
    noise_ = inv_vecs_ * diffusion.D.cast<std::complex<double>>() * inv_vecs_.transpose();
  }
}

Mat4 GaussianPropagator::transfer(double t) const {
  if (!diagonalizable_) throw std::logic_error("transfer() needs a diagonalizable drift");
  const Eigen::Vector4cd phase = (lambda_ * t).array().exp().matrix();
  return (vecs_ * phase.asDiagonal() * inv_vecs_).real();
}

GaussianState GaussianPropagator::evolve(const GaussianState& initial, double t) const {
  if (t == 0.0) return initial;
  const Mat4 phi = transfer(t);
  GaussianState out;
  out.means = phi * initial.means;
  out.cov = phi * initial.cov * phi.transpose();
  if (has_noise_) {
    // int_0^t e^{As} D e^{A^T s} ds, elementwise in the eigenbasis
    Eigen::Matrix4cd kernel;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        kernel(i, j) = noise_(i, j) * integrated_exponential(lambda_(i) + lambda_(j), t);
      }
    }
    out.cov += (vecs_ * kernel * vecs_.transpose()).real();
  }
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

NumericPropagator::NumericPropagator(const DriftMatrix& drift, const DiffusionMatrix& diffusion,
                                     double dt)
    : a_(drift.A), d_(diffusion.D), dt_(dt) {
  if (!(dt > 0.0)) throw DomainError("integrator step must be positive");
}

GaussianState NumericPropagator::advance(const GaussianState& state, double duration) const {
  if (duration <= 0.0) return state;
  const auto steps = static_cast<long>(std::ceil(duration / dt_ - 1e-9));
  const double h = duration / static_cast<double>(steps);
  const auto cov_rate = [&](const Mat4& s) -> Mat4 {
    return a_ * s + s * a_.transpose() + d_;
  };
  Vec4 m = state.means;
  Mat4 s = state.cov;
  for (long k = 0; k < steps; ++k) {
    const Vec4 m1 = a_ * m;
    const Vec4 m2 = a_ * (m + 0.5 * h * m1);
    const Vec4 m3 = a_ * (m + 0.5 * h * m2);
    const Vec4 m4 = a_ * (m + h * m3);
    m += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);

    const Mat4 s1 = cov_rate(s);
    const Mat4 s2 = cov_rate(s + 0.5 * h * s1);
    const Mat4 s3 = cov_rate(s + 0.5 * h * s2);
    const Mat4 s4 = cov_rate(s + h * s3);
    s += (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
  }
  GaussianState out;
  out.means = m;
  out.cov = 0.5 * (s + s.transpose());
  return out;
}

Trajectory propagate(const EvolutionSpec& spec, const GaussianState& initial,
                     const PropagateOptions& opts) {
  spec.validate();
  check_physical(initial);
  const DriftMatrix drift = build_drift(spec.h, spec.gamma);
  const DiffusionMatrix diffusion = build_diffusion(spec.gamma, spec.n_th);

  Trajectory traj;
  traj.h = spec.h;
  traj.gamma = spec.gamma;
  traj.times = spec.times;
  traj.states.reserve(spec.times.size());
  traj.obs.reserve(spec.times.size());

  std::optional<GaussianPropagator> exact;
  if (opts.method == Method::Exact) {
    exact.emplace(drift, diffusion);
    if (!exact->diagonalizable()) exact.reset();
  }
  const NumericPropagator numeric(drift, diffusion, opts.numeric_dt);

  GaussianState current = initial;
  double t_prev = 0.0;
  for (const double t : spec.times) {
    if (exact) {
      current = exact->evolve(initial, t);
    } else {
      current = numeric.advance(current, t - t_prev);
      t_prev = t;
    }
    guard_divergence(current, t, opts.divergence_bound);
    traj.states.push_back(current);
    traj.obs.push_back(observables(current, spec.h));
  }
  return traj;
}

GaussianState steady_state(const DriftMatrix& drift, const DiffusionMatrix& diffusion) {
  if (stability_check(drift) != Stability::StableOpen) {
    throw DomainError("steady state requires a damped, asymptotically stable drift");
  }
  // vec(A S + S A^T) = (I (x) A + A (x) I) vec(S), column-major vec
  Eigen::Matrix<double, 16, 16> op = Eigen::Matrix<double, 16, 16>::Zero();
  const Mat4& a = drift.A;
  for (int i = 0; i < 4; ++i) {
    op.block<4, 4>(4 * i, 4 * i) += a;
    for (int k = 0; k < 4; ++k) {
      op.block<4, 4>(4 * i, 4 * k) += a(i, k) * Mat4::Identity();
    }
  }
  const Mat4 rhs_mat = -diffusion.D;
  const Eigen::Matrix<double, 16, 1> rhs =
      Eigen::Map<const Eigen::Matrix<double, 16, 1>>(rhs_mat.data());
  const Eigen::Matrix<double, 16, 1> x = op.fullPivLu().solve(rhs);
  GaussianState ss;
  ss.means.setZero();
  ss.cov = Eigen::Map<const Mat4>(x.data());
  ss.cov = 0.5 * (ss.cov + ss.cov.transpose()).eval();
  return ss;
}

std::optional<double> field_value(const Observables& o, Field f) {
  switch (f) {
    case Field::E1:
      return o.E1;
    case Field::E2:
      return o.E2;
    case Field::Ee:
      return o.Ee;
    case Field::Ei:
      return o.Ei;
    case Field::R:
      return o.R;
    case Field::S:
      return o.S;
    case Field::C:
      return o.C;
  }
  return std::nullopt;
}

const char* to_string(Field f) {
  switch (f) {
    case Field::E1:
      return "e1";
    case Field::E2:
      return "e2";
    case Field::Ee:
      return "ee";
    case Field::Ei:
      return "ei";
    case Field::R:
      return "r";
    case Field::S:
      return "s";
    case Field::C:
      return "c";
  }
  return "?";
}

WindowMax max_over_window(const Trajectory& traj, Field field) {
  if (traj.obs.empty()) throw std::invalid_argument("max_over_window: empty trajectory");
  std::optional<WindowMax> best;
  for (std::size_t i = 0; i < traj.obs.size(); ++i) {
    const auto v = field_value(traj.obs[i], field);
    if (!v || std::isnan(*v)) continue;
    if (!best || *v > best->value) best = WindowMax{*v, traj.times[i]};
  }
  if (!best) {
    throw std::invalid_argument(std::string("max_over_window: every sample of ") +
                                to_string(field) + " is undefined");
  }
  return *best;
}

std::vector<EnergySources> energy_bookkeeping(const Trajectory& traj) {
  if (traj.gamma != 0.0) {
    throw std::invalid_argument("energy bookkeeping is only defined for closed systems");
  }
  std::vector<EnergySources> out;
  if (traj.obs.empty()) return out;
  out.reserve(traj.obs.size());
  const Observables& first = traj.obs.front();
  for (const Observables& o : traj.obs) {
    const double from_charger = first.E1 - o.E1;
    const double from_interaction = first.Ei - o.Ei;
    const double gained = o.E2 - first.E2;
    const double scale = std::max({1.0, std::abs(first.E1), std::abs(o.E1), std::abs(o.E2)});
    if (std::abs(from_charger + from_interaction - gained) > 1e-8 * scale) {
      throw std::logic_error("energy bookkeeping: total energy not conserved");
    }
    EnergySources src;
    if (gained > kEmptyBatteryEnergy) {
      src.charger = from_charger / gained;
      src.interaction = from_interaction / gained;
    }
    out.push_back(src);
  }
  return out;
}

}  // namespace cvqb
