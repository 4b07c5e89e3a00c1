#include "cvqb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace cvqb {

namespace {

constexpr std::size_t kPadFactor = 8;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

FrequencyReport dominant_frequencies(std::span<const double> times,
                                     std::span<const double> values, int count) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("dominant_frequencies: times and values differ in length");
  }
  const std::size_t n = times.size();
  if (n < 16) throw std::invalid_argument("dominant_frequencies: need at least 16 samples");
  if (count < 1) throw std::invalid_argument("dominant_frequencies: count must be >= 1");

  const double dt = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  if (!(dt > 0.0)) throw std::invalid_argument("dominant_frequencies: time grid not increasing");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 * dt) {
      throw std::invalid_argument("dominant_frequencies: time grid is not uniform");
    }
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t m = next_pow2(kPadFactor * n);
  std::vector<double> buf(m, 0.0);
  double window_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                             static_cast<double>(n - 1));
    buf[i] = w * (values[i] - mean);
    window_sum += w;
  }

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, buf);

  const std::size_t half = m / 2;
  std::vector<double> mag(half + 1);
  for (std::size_t k = 0; k <= half; ++k) mag[k] = std::abs(spec[k]);

  const double bin_to_omega = 2.0 * std::numbers::pi / (static_cast<double>(m) * dt);
  const double padded_bins_per_resolution = static_cast<double>(m) / static_cast<double>(n);
  const auto k_min = static_cast<std::size_t>(std::ceil(2.0 * padded_bins_per_resolution));
  // Hann main lobe spans +-2 resolution bins
  const double lobe = 2.0 * padded_bins_per_resolution * bin_to_omega;

  struct Peak {
    double omega;
    double magnitude;
  };
  std::vector<Peak> peaks;
  for (std::size_t k = std::max<std::size_t>(k_min, 1); k < half; ++k) {
    if (!(mag[k] > mag[k - 1] && mag[k] >= mag[k + 1]) || mag[k] <= 0.0) continue;
    double offset = 0.0;
    if (mag[k - 1] > 0.0 && mag[k + 1] > 0.0) {
      const double a = std::log(mag[k - 1]);
      const double b = std::log(mag[k]);
      const double c = std::log(mag[k + 1]);
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) offset = 0.5 * (a - c) / denom;
    }
    peaks.push_back({(static_cast<double>(k) + offset) * bin_to_omega, mag[k]});
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& x, const Peak& y) { return x.magnitude > y.magnitude; });

  FrequencyReport report;
  for (const Peak& p : peaks) {
    if (static_cast<int>(report.tones.size()) >= count) break;
    const bool shadowed = std::any_of(report.tones.begin(), report.tones.end(), [&](const Tone& t) {
      return std::abs(t.frequency - p.omega) < lobe;
    });
    if (shadowed) continue;
    report.tones.push_back({p.omega, 2.0 * p.magnitude / window_sum});
  }

  if (report.tones.size() >= 2) {
    const double lo = std::min(report.tones[0].frequency, report.tones[1].frequency);
    const double hi = std::max(report.tones[0].frequency, report.tones[1].frequency);
    report.beat = BeatSummary{lo, hi, 2.0 * lo, 2.0 * hi};
  }
  return report;
}

}  // namespace cvqb
