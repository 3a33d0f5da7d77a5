/// @file common.hpp
/// @brief Shared scalar types and small numeric helpers.
#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace tns {

using real = double;
using complex = std::complex<double>;
using index_t = std::int64_t;

inline constexpr real pi = 3.14159265358979323846;

/// Thrown when user-supplied parameters are outside their admissible range
/// (bad grid sizes, non-positive densities, invalid model parameters, ...).
class invalid_parameter : public std::runtime_error {
 public:
  explicit invalid_parameter(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an iterative solve fails to converge within its budget.
class solver_failure : public std::runtime_error {
 public:
  explicit solver_failure(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a flow map leaves its admissible deformation range (the
/// accumulated velocity-gradient bound sigma is exceeded).
class sigma_violation : public solver_failure {
 public:
  explicit sigma_violation(const std::string& what) : solver_failure(what) {}
};

/// Thrown when a time integration blows up (growth guard or density floor).
class instability_detected : public solver_failure {
 public:
  explicit instability_detected(const std::string& what) : solver_failure(what) {}
};

/// Shortest round-trippable decimal form (17 significant digits).
inline std::string format_real(real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// i^order as a complex unit, used for spectral differentiation factors.
inline complex unit_power_i(int order) {
  switch (((order % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace tns
