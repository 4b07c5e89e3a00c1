#include "cvqb/fock_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cvqb/errors.hpp"

namespace cvqb::fock {

namespace {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;
constexpr Complex kI{0.0, 1.0};

// exp(-i K) for Hermitian K
CMatrix unitary_from_hermitian(const CMatrix& k) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
  const Eigen::VectorXcd phases = (-kI * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double entropy_of(const std::vector<double>& probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

void require_single(const FockDensityMatrix& rho, const char* what) {
  if (rho.n2 != 1) throw std::invalid_argument(std::string(what) + " expects a single-mode state");
}

void require_two_mode(const FockDensityMatrix& rho, const char* what) {
  if (rho.n2 < 2) throw std::invalid_argument(std::string(what) + " expects a two-mode state");
}

void check_overflow(const FockDensityMatrix& rho) {
  const double top = top_occupation(rho);
  if (top > kOverflowLimit) {
    std::ostringstream os;
    os << "Fock truncation overflow: top level holds " << top << " (limit " << kOverflowLimit
       << "); increase the number of levels";
    throw TruncationError(os.str());
  }
}

SparseC kron_sparse(const CMatrix& a, const CMatrix& b) {
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int i1 = 0; i1 < a.rows(); ++i1)
    for (int j1 = 0; j1 < a.cols(); ++j1) {
      if (a(i1, j1) == 0.0) continue;
      for (int i2 = 0; i2 < b.rows(); ++i2)
        for (int j2 = 0; j2 < b.cols(); ++j2) {
          if (b(i2, j2) == 0.0) continue;
          trip.emplace_back(i1 * b.rows() + i2, j1 * b.cols() + j2, a(i1, j1) * b(i2, j2));
        }
    }
  SparseC m(a.rows() * b.rows(), a.cols() * b.cols());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

FockOperators make_operators(int levels) {
  if (levels < 2) throw std::invalid_argument("Fock truncation needs at least 2 levels");
  FockOperators ops;
  ops.levels = levels;
  ops.a = RMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ops.adag = ops.a.transpose();
  ops.number = ops.adag * ops.a;
  ops.x = ops.a + ops.adag;
  ops.p = kI * (ops.adag - ops.a).cast<Complex>();
  return ops;
}

WilliamsonForm williamson_1mode(const Mat2& cov) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (cov + cov.transpose()));
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(1);
  WilliamsonForm w;
  w.nu = lo > 0.0 ? std::sqrt(lo * hi) : 0.0;
  if (w.nu < 1.0 - kPuritySlack) {
    throw UnphysicalStateError("williamson_1mode: covariance below the vacuum bound");
  }
  w.r = 0.25 * std::log(hi / lo);
  if (w.r > 1e-14) {
    const Vec2 major = es.eigenvectors().col(1);
    double phi = std::atan2(major(1), major(0));
    if (phi < 0.0) phi += std::numbers::pi;
    if (phi >= std::numbers::pi) phi -= std::numbers::pi;
    w.phi = phi;
  } else {
    w.r = 0.0;
  }
  return w;
}

FockDensityMatrix gaussian_to_fock(const SingleModeState& s, int levels) {
  const WilliamsonForm w = williamson_1mode(s.cov);
  const int work = levels + std::max(40, levels);
  const FockOperators ops = make_operators(work);

  // thermal seed with n = (nu - 1)/2
  const double nbar = std::max(0.0, (w.nu - 1.0) / 2.0);
  CMatrix rho = CMatrix::Zero(work, work);
  for (int n = 0; n < work; ++n) {
    rho(n, n) = nbar == 0.0 ? (n == 0 ? 1.0 : 0.0)
                            : std::pow(nbar / (nbar + 1.0), n) / (nbar + 1.0);
  }

  const CMatrix a = ops.a.cast<Complex>();
  const CMatrix ad = ops.adag.cast<Complex>();
  if (w.r > 0.0) {
    // S(z) = exp[(z* a^2 - z a^+2)/2] stretches the axis at angle (arg z - pi)/2
    const Complex z = std::polar(w.r, std::numbers::pi + 2.0 * w.phi);
    const CMatrix gen = 0.5 * (std::conj(z) * a * a - z * ad * ad);
    const CMatrix sq = unitary_from_hermitian(kI * gen);
    rho = (sq * rho * sq.adjoint()).eval();
  }
  const Complex beta{s.mean(0) / 2.0, s.mean(1) / 2.0};
  if (std::abs(beta) > 0.0) {
    const CMatrix gen = beta * ad - std::conj(beta) * a;
    const CMatrix disp = unitary_from_hermitian(kI * gen);
    rho = (disp * rho * disp.adjoint()).eval();
  }

  double discarded = 0.0;
  for (int n = levels; n < work; ++n) discarded += rho(n, n).real();
  if (discarded >= kTailLimit) {
    std::ostringstream os;
    os << "gaussian_to_fock: " << discarded << " probability beyond " << levels << " levels";
    throw TruncationError(os.str());
  }
  FockDensityMatrix out;
  out.n1 = levels;
  out.n2 = 1;
  out.rho = rho.topLeftCorner(levels, levels);
  out.rho /= out.rho.trace().real();
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  return out;
}

FockDensityMatrix tensor(const FockDensityMatrix& charger, const FockDensityMatrix& battery) {
  require_single(charger, "tensor");
  require_single(battery, "tensor");
  FockDensityMatrix out;
  out.n1 = charger.n1;
  out.n2 = battery.n1;
  const int d2 = battery.n1;
  out.rho.resize(out.dim(), out.dim());
  for (int i1 = 0; i1 < charger.n1; ++i1)
    for (int j1 = 0; j1 < charger.n1; ++j1)
      out.rho.block(i1 * d2, j1 * d2, d2, d2) = charger.rho(i1, j1) * battery.rho;
  return out;
}

FockDensityMatrix partial_trace(const FockDensityMatrix& rho, Mode keep) {
  require_two_mode(rho, "partial_trace");
  FockDensityMatrix out;
  out.n2 = 1;
  if (keep == Mode::Charger) {
    out.n1 = rho.n1;
    out.rho = CMatrix::Zero(rho.n1, rho.n1);
    for (int i1 = 0; i1 < rho.n1; ++i1)
      for (int j1 = 0; j1 < rho.n1; ++j1)
        out.rho(i1, j1) = rho.rho.block(i1 * rho.n2, j1 * rho.n2, rho.n2, rho.n2).trace();
  } else {
    out.n1 = rho.n2;
    out.rho = CMatrix::Zero(rho.n2, rho.n2);
    for (int i1 = 0; i1 < rho.n1; ++i1)
      out.rho += rho.rho.block(i1 * rho.n2, i1 * rho.n2, rho.n2, rho.n2);
  }
  return out;
}

std::complex<double> expectation(const FockDensityMatrix& rho, const CMatrix& a,
                                 const CMatrix& b) {
  require_two_mode(rho, "expectation");
  // tr(rho (A (x) B)) = sum rho[(i1,i2),(j1,j2)] A[j1,i1] B[j2,i2]
  Complex acc = 0.0;
  for (int i1 = 0; i1 < rho.n1; ++i1)
    for (int j1 = 0; j1 < rho.n1; ++j1) {
      const Complex aji = a(j1, i1);
      if (aji == 0.0) continue;
      const auto blk = rho.rho.block(i1 * rho.n2, j1 * rho.n2, rho.n2, rho.n2);
      acc += aji * (blk.array() * b.transpose().array()).sum();
    }
  return acc;
}

double top_occupation(const FockDensityMatrix& rho) {
  if (rho.n2 == 1) return rho.rho(rho.n1 - 1, rho.n1 - 1).real();
  const FockDensityMatrix c = partial_trace(rho, Mode::Charger);
  const FockDensityMatrix b = partial_trace(rho, Mode::Battery);
  return std::max(top_occupation(c), top_occupation(b));
}

SingleModeState moments(const FockDensityMatrix& single) {
  require_single(single, "moments");
  const FockOperators ops = make_operators(single.n1);
  const CMatrix x = ops.x.cast<Complex>();
  const CMatrix& p = ops.p;
  const auto ev = [&](const CMatrix& o) { return (single.rho * o).trace().real(); };
  SingleModeState s;
  s.mean << ev(x), ev(p);
  s.cov(0, 0) = ev(x * x) - s.mean(0) * s.mean(0);
  s.cov(1, 1) = ev(p * p) - s.mean(1) * s.mean(1);
  s.cov(0, 1) = ev(0.5 * (x * p + p * x)) - s.mean(0) * s.mean(1);
  s.cov(1, 0) = s.cov(0, 1);
  return s;
}

namespace {

template <typename Expect>
GaussianState moments_from(int n1, int n2, Expect&& expect) {
  const FockOperators o1 = make_operators(n1);
  const FockOperators o2 = make_operators(n2);
  const std::array<CMatrix, 2> x{o1.x.cast<Complex>(), o2.x.cast<Complex>()};
  const std::array<CMatrix, 2> p{o1.p, o2.p};
  const std::array<CMatrix, 2> id{CMatrix::Identity(n1, n1), CMatrix::Identity(n2, n2)};
  // quadrature k lives on mode k / 2; build (mode-1 factor, mode-2 factor)
  const auto factor = [&](int k, int mode) -> CMatrix {
    if (k / 2 != mode) return id[mode];
    return k % 2 == 0 ? x[mode] : p[mode];
  };
  GaussianState st;
  for (int k = 0; k < 4; ++k) st.means(k) = expect(factor(k, 0), factor(k, 1)).real();
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double second;
      if (i / 2 != j / 2) {
        second = expect(factor(i, 0) * factor(j, 0), factor(i, 1) * factor(j, 1)).real();
      } else {
        const int m = i / 2;
        const CMatrix ri = factor(i, m);
        const CMatrix rj = factor(j, m);
        const CMatrix sym = 0.5 * (ri * rj + rj * ri);
        second = (m == 0 ? expect(sym, id[1]) : expect(id[0], sym)).real();
      }
      st.cov(i, j) = second - st.means(i) * st.means(j);
      st.cov(j, i) = st.cov(i, j);
    }
  }
  return st;
}

}  // namespace

GaussianState two_mode_moments(const FockDensityMatrix& rho) {
  require_two_mode(rho, "two_mode_moments");
  return moments_from(rho.n1, rho.n2,
                      [&](const CMatrix& a, const CMatrix& b) { return expectation(rho, a, b); });
}

std::vector<double> spectrum_descending(const FockDensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.rho, Eigen::EigenvaluesOnly);
  std::vector<double> vals(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return vals;
}

double mean_photon_fock(const FockDensityMatrix& single) {
  require_single(single, "mean_photon_fock");
  double n = 0.0;
  for (int k = 0; k < single.n1; ++k) n += k * single.rho(k, k).real();
  return n;
}

double entropy_fock(const FockDensityMatrix& rho) { return entropy_of(spectrum_descending(rho)); }

double ergotropy_fock(const FockDensityMatrix& single, double omega) {
  require_single(single, "ergotropy_fock");
  const std::vector<double> e = spectrum_descending(single);
  double passive = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) passive += omega * static_cast<double>(k) * e[k];
  return omega * mean_photon_fock(single) - passive;
}

double coherence_fock(const FockDensityMatrix& single) {
  require_single(single, "coherence_fock");
  std::vector<double> diag(single.n1);
  for (int k = 0; k < single.n1; ++k) diag[k] = single.rho(k, k).real();
  return entropy_of(diag) - entropy_fock(single);
}

double thermal_relative_entropy_fock(const FockDensityMatrix& single) {
  require_single(single, "thermal_relative_entropy_fock");
  const double n = mean_photon_fock(single);
  if (n <= 0.0) return 0.0;
  // -S(rho) - sum_k rho_kk ln tau_k with ln tau_k = k ln n - (k + 1) ln(n + 1)
  double cross = 0.0;
  for (int k = 0; k < single.n1; ++k) {
    cross += single.rho(k, k).real() * (k * std::log(n) - (k + 1) * std::log1p(n));
  }
  return -entropy_fock(single) - cross;
}

FockEnsemble FockEnsemble::from_product(const FockDensityMatrix& charger,
                                        const FockDensityMatrix& battery, double cutoff) {
  require_single(charger, "FockEnsemble::from_product");
  require_single(battery, "FockEnsemble::from_product");
  Eigen::SelfAdjointEigenSolver<CMatrix> e1(charger.rho);
  Eigen::SelfAdjointEigenSolver<CMatrix> e2(battery.rho);
  FockEnsemble ens;
  ens.n1 = charger.n1;
  ens.n2 = battery.n1;
  for (int a = 0; a < charger.n1; ++a) {
    for (int b = 0; b < battery.n1; ++b) {
      const double w = e1.eigenvalues()(a) * e2.eigenvalues()(b);
      if (w <= cutoff) continue;
      CVector psi(ens.n1 * ens.n2);
      for (int i1 = 0; i1 < ens.n1; ++i1)
        psi.segment(i1 * ens.n2, ens.n2) = e1.eigenvectors()(i1, a) * e2.eigenvectors().col(b);
      ens.weights.push_back(w);
      ens.states.push_back(std::move(psi));
    }
  }
  return ens;
}

FockDensityMatrix FockEnsemble::to_density() const {
  FockDensityMatrix out;
  out.n1 = n1;
  out.n2 = n2;
  out.rho = CMatrix::Zero(n1 * n2, n1 * n2);
  for (std::size_t k = 0; k < states.size(); ++k)
    out.rho.noalias() += weights[k] * states[k] * states[k].adjoint();
  return out;
}

FockDensityMatrix FockEnsemble::reduced(Mode keep) const {
  FockDensityMatrix out;
  out.n2 = 1;
  out.n1 = keep == Mode::Charger ? n1 : n2;
  out.rho = CMatrix::Zero(out.n1, out.n1);
  for (std::size_t k = 0; k < states.size(); ++k) {
    // m(i2, i1) = psi[i1 * n2 + i2]
    const Eigen::Map<const CMatrix> m(states[k].data(), n2, n1);
    if (keep == Mode::Charger) {
      out.rho.noalias() += weights[k] * (m.transpose() * m.conjugate());
    } else {
      out.rho.noalias() += weights[k] * (m * m.adjoint());
    }
  }
  return out;
}

std::complex<double> FockEnsemble::expectation(const CMatrix& a, const CMatrix& b) const {
  Complex acc = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Eigen::Map<const CMatrix> m(states[k].data(), n2, n1);
    const CMatrix applied = b * m * a.transpose();
    acc += weights[k] * (m.conjugate().array() * applied.array()).sum();
  }
  return acc;
}

GaussianState FockEnsemble::moments() const {
  return moments_from(n1, n2,
                      [&](const CMatrix& a, const CMatrix& b) { return expectation(a, b); });
}

TwoModeFockSystem::TwoModeFockSystem(const HamiltonianParams& h, int n1, int n2)
    : params_(h), n1_(n1), n2_(n2) {
  const FockOperators o1 = make_operators(n1);
  const FockOperators o2 = make_operators(n2);
  const RMatrix q1 = o1.adag - o1.a;
  const RMatrix q2 = o2.adag - o2.a;
  const int d = n1 * n2;
  h_ = RMatrix::Zero(d, d);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int j1 = 0; j1 < n1; ++j1) {
      const double x = o1.x(i1, j1);
      const double q = q1(i1, j1);
      if (x == 0.0 && q == 0.0) continue;
      h_.block(i1 * n2, j1 * n2, n2, n2) += h.g * x * o2.x + h.G * q * q2;
    }
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) h_(i1 * n2 + i2, i1 * n2 + i2) += h.omega1 * i1 + h.omega2 * i2;

  // every term changes n1 + n2 by 0 or 2, so total parity is conserved
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) sector_index_[(i1 + i2) % 2].push_back(i1 * n2 + i2);
  for (int s = 0; s < 2; ++s) {
    const auto& idx = sector_index_[s];
    const auto m = static_cast<int>(idx.size());
    if (m == 0) continue;
    RMatrix block(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) block(i, j) = h_(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(block);
    sector_vecs_[s] = es.eigenvectors();
    sector_vals_[s] = es.eigenvalues();
  }
}

CVector TwoModeFockSystem::evolve(const CVector& psi, double t) const {
  CVector out = CVector::Zero(psi.size());
  for (int s = 0; s < 2; ++s) {
    const auto& idx = sector_index_[s];
    const auto m = static_cast<int>(idx.size());
    if (m == 0) continue;
    CVector local(m);
    for (int i = 0; i < m; ++i) local(i) = psi(idx[i]);
    CVector coeff = sector_vecs_[s].transpose().cast<Complex>() * local;
    for (int i = 0; i < m; ++i) coeff(i) *= std::exp(-kI * sector_vals_[s](i) * t);
    const CVector back = sector_vecs_[s].cast<Complex>() * coeff;
    for (int i = 0; i < m; ++i) out(idx[i]) = back(i);
  }
  return out;
}

FockEnsemble TwoModeFockSystem::evolve(const FockEnsemble& ens, double t) const {
  if (ens.n1 != n1_ || ens.n2 != n2_) throw std::invalid_argument("ensemble truncation mismatch");
  FockEnsemble out = ens;
  for (auto& psi : out.states) psi = evolve(psi, t);
  double top = 0.0;
  top = std::max(top_occupation(out.reduced(Mode::Charger)),
                 top_occupation(out.reduced(Mode::Battery)));
  if (top > kOverflowLimit) {
    std::ostringstream os;
    os << "Fock truncation overflow: top level holds " << top;
    throw TruncationError(os.str());
  }
  return out;
}

CMatrix TwoModeFockSystem::unitary(double t) const {
  const int d = n1_ * n2_;
  CMatrix u = CMatrix::Zero(d, d);
  for (int s = 0; s < 2; ++s) {
    const auto& idx = sector_index_[s];
    const auto m = static_cast<int>(idx.size());
    if (m == 0) continue;
    Eigen::VectorXcd phases(m);
    for (int i = 0; i < m; ++i) phases(i) = std::exp(-kI * sector_vals_[s](i) * t);
    const CMatrix vc = sector_vecs_[s].cast<Complex>();
    const CMatrix block = vc * phases.asDiagonal() * vc.transpose();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) u(idx[i], idx[j]) = block(i, j);
  }
  return u;
}

FockDensityMatrix TwoModeFockSystem::evolve(const FockDensityMatrix& rho, double t) const {
  if (rho.n1 != n1_ || rho.n2 != n2_) throw std::invalid_argument("density truncation mismatch");
  const CMatrix u = unitary(t);
  FockDensityMatrix out = rho;
  out.rho = u * rho.rho * u.adjoint();
  check_overflow(out);
  return out;
}

FockDensityMatrix TwoModeFockSystem::evolve_open(const FockDensityMatrix& rho, double t,
                                                 double gamma, double n_th, double dt) const {
  if (rho.n1 != n1_ || rho.n2 != n2_) throw std::invalid_argument("density truncation mismatch");
  if (gamma < 0.0 || n_th < 0.0) throw DomainError("gamma and n_th must be non-negative");
  if (!(dt > 0.0)) throw DomainError("integrator step must be positive");
  if (gamma == 0.0) return evolve(rho, t);

  const FockOperators o1 = make_operators(n1_);
  const CMatrix id2 = CMatrix::Identity(n2_, n2_);
  const SparseC h = h_.cast<Complex>().sparseView();
  const SparseC a = kron_sparse(o1.a.cast<Complex>(), id2);
  const SparseC ad = kron_sparse(o1.adag.cast<Complex>(), id2);
  const double up = gamma * n_th / 2.0;
  const double down = gamma * (n_th + 1.0) / 2.0;
  const SparseC aad = a * ad;
  const SparseC ada = ad * a;
  const SparseC k = -kI * h - up * aad - down * ada;

  // d rho/dt = -i[H, rho] + up D[a^+] rho + down D[a] rho with
  // D[L] rho = 2 L rho L^+ - L^+ L rho - rho L^+ L. For Hermitian rho this is
  // K rho + (K rho)^+ + 2 down a (a rho)^+ + 2 up a^+ (a^+ rho)^+.
  const auto rhs = [&](const CMatrix& r) -> CMatrix {
    const CMatrix kr = k * r;
    const CMatrix ar = a * r;
    const CMatrix adr = ad * r;
    CMatrix out = kr + kr.adjoint();
    out += (2.0 * down) * (a * ar.adjoint());
    out += (2.0 * up) * (ad * adr.adjoint());
    return out;
  };

  const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
  FockDensityMatrix out = rho;
  if (steps <= 0) return out;
  const double step = t / static_cast<double>(steps);
  CMatrix r = rho.rho;
  for (long k = 0; k < steps; ++k) {
    const CMatrix k1 = rhs(r);
    const CMatrix k2 = rhs(r + 0.5 * step * k1);
    const CMatrix k3 = rhs(r + 0.5 * step * k2);
    const CMatrix k4 = rhs(r + step * k3);
    r += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  out.rho = r;
  check_overflow(out);
  return out;
}

FockDensityMatrix evolve_fock(const HamiltonianParams& h, const FockDensityMatrix& initial,
                              double t, double gamma, double n_th) {
  require_two_mode(initial, "evolve_fock");
  const TwoModeFockSystem sys(h, initial.n1, initial.n2);
  if (t == 0.0) return initial;
  return gamma == 0.0 ? sys.evolve(initial, t) : sys.evolve_open(initial, t, gamma, n_th);
}

}  // namespace cvqb::fock
