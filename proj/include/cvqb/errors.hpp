#pragma once

#include <stdexcept>
#include <string>

namespace cvqb {

/// Parameters outside the physical domain of the model (|k| >= 1, L <= 0, n_p < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A covariance matrix that violates the Heisenberg bound.
class UnphysicalStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Moments blew up, typically in the deep-strong-coupling regime.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A truncated Fock representation lost too much probability to its top levels.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cvqb
