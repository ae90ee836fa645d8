#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aqs {

using cplx = std::complex<double>;

// Error hierarchy. Everything thrown by this library derives from Error,
// so CLI code can catch one type at the top level.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg, double best_residual)
      : Error(msg), best_residual(best_residual) {}
  double best_residual;
};

inline int popcount64(std::uint64_t v) { return __builtin_popcountll(v); }

// +1 / -1 parity of the number of set bits.
inline double parity_sign(std::uint64_t v) {
  return (popcount64(v) & 1) ? -1.0 : 1.0;
}

}  // namespace aqs
