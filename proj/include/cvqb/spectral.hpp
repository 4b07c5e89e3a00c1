#pragma once

#include <optional>
#include <span>
#include <vector>

namespace cvqb {

struct Tone {
  double frequency = 0.0;  // angular, rad per unit time
  double amplitude = 0.0;  // estimated cosine amplitude
};

/// Reading of a beating signal from its two strongest tones: the slow envelope sits at
/// half the difference and the fast carrier at half the sum of the two underlying
/// characteristic frequencies.
struct BeatSummary {
  double half_difference = 0.0;  // envelope, the lower of the two strongest tones
  double half_sum = 0.0;         // carrier, the higher of the two strongest tones
  double difference = 0.0;       // 2 * half_difference
  double sum = 0.0;              // 2 * half_sum
};

struct FrequencyReport {
  std::vector<Tone> tones;  // strongest first
  std::optional<BeatSummary> beat;
};

/// Strongest `count` spectral peaks of a uniformly sampled real series: mean removal,
/// Hann window, 8x zero padding, then parabolic interpolation of the log-magnitude peak.
/// Peaks below two resolution bins (2 * 2pi / T) are ignored.
/// Throws std::invalid_argument on a non-uniform grid or fewer than 16 samples.
[[nodiscard]] FrequencyReport dominant_frequencies(std::span<const double> times,
                                                   std::span<const double> values,
                                                   int count = 2);

}  // namespace cvqb
