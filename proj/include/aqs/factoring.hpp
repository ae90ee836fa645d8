#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aqs/pauli.hpp"
#include "aqs/rational.hpp"

namespace aqs {

// Factorization omega = a*b with k-bit a and (n-k)-bit b, encoded as a set of
// per-cell long-multiplication equations over bit variables
//   a_i b_j + S_ij + z_ij = S_{i+1,j-1} + 2 z_{i-1,j}
// with boundary closures folding into constants, plus an optional reduction
// for odd omega that pins the leading/trailing factor bits to 1.

struct FactorVar {
  enum class Kind { a, b, S, z };
  Kind kind = Kind::a;
  int i = 0;  // a_i / b_j use i; grids use (i, j)
  int j = 0;

  auto operator<=>(const FactorVar&) const = default;
  std::string name() const;
};

// One factoring equation after constant folding. Variables are referenced by
// qubit index; the penalty must vanish exactly when the equation holds.
struct FactorEquation {
  std::optional<std::pair<int, int>> product;  // qubits A, B of the one product
  std::vector<std::pair<int, int>> linear;     // (coefficient, qubit)
  int constant = 0;

  bool product_free() const { return !product.has_value(); }
};

// H_F = h + sum h_i sigma^z_i + 2 sum_{i<j} h_ij sigma^z_i sigma^z_j.
struct QuadraticForm {
  double h = 0.0;
  std::vector<double> h_i;
  std::vector<std::vector<double>> h_ij;  // symmetric, zero diagonal
};

class FactoringLayout {
 public:
  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t omega() const { return omega_; }
  bool odd_reduced() const { return odd_reduced_; }

  int n_qubits() const { return static_cast<int>(qubit_vars_.size()); }
  const std::vector<FactorVar>& qubit_vars() const { return qubit_vars_; }
  const std::vector<FactorEquation>& equations() const { return equations_; }

  // Equations involving no product of two distinct qubits, counted at the
  // structural level: the definitional last-column equations eliminated by
  // the odd reduction are included, the one redundant corner cell is not.
  int product_free_count() const { return product_free_count_; }

  // Factors (a, b) encoded by an assignment bitmask over the kept qubits.
  std::pair<std::uint64_t, std::uint64_t> decode(std::uint64_t assignment) const;

  friend FactoringLayout build_layout(std::uint64_t omega, int n, int k,
                                      bool odd_reduced);

 private:
  int n_ = 0, k_ = 0;
  std::uint64_t omega_ = 0;
  bool odd_reduced_ = false;
  int product_free_count_ = 0;
  std::vector<FactorVar> qubit_vars_;
  std::vector<FactorEquation> equations_;
};

FactoringLayout build_layout(std::uint64_t omega, int n, int k,
                             bool odd_reduced);

// Exact penalty of one equation: 2[ (A+B-1/2)/2 + S ]^2 - 1/8 when a product
// is present, S^2 otherwise. Zero iff the equation holds, else >= 1.
Rational penalty(const FactorEquation& eq, std::uint64_t assignment);

// Diagonal operator whose eigenvalue on an assignment is the total penalty.
PauliOperatorSum penalty_hamiltonian(const FactoringLayout& layout);

// Exact coefficient extraction without materializing the diagonal.
QuadraticForm to_quadratic(const FactoringLayout& layout);

PauliOperatorSum reconstruct(const QuadraticForm& q);

struct InitialSet {
  PauliOperatorSum x;
  PauliOperatorSum xy;
  PauliOperatorSum xyz;
};

// H^x = sum (1 - sigma^x)/2; H^xy/H^xyz are ferromagnets on the |h_ij|
// topology, shifted to ground energy >= 0 and conserving total sigma^z.
InitialSet initial_hamiltonians(const QuadraticForm& q);

struct GroundSearch {
  Rational energy;                           // minimum total penalty
  std::vector<std::uint64_t> assignments;    // all minimizers
  std::vector<std::pair<std::uint64_t, std::uint64_t>> factors;  // decoded
};

// Exhaustive minimum of the total penalty; guarded to n_qubits <= 24.
GroundSearch brute_force_ground(const FactoringLayout& layout);

// Audit of the three penalty encodings' coefficient growth. The squared
// difference (omega - ab)^2 and the Hamming-distance penalty are never built
// as operators; only their widths are reported.
struct NaiveReport {
  int n = 0, k = 0;
  double square_coeff_max = 0.0;   // largest |coefficient| of (omega - ab)^2
  double square_coeff_min = 0.0;   // smallest nonzero |coefficient|
  double square_width = 0.0;       // spectral width of the squared difference
  double hamming_width = 0.0;      // n: one indicator per product bit
  double cell_width_bound = 0.0;   // 21 per equation times the cell count
};

NaiveReport naive_hamiltonian_coefficients(int n, int k);

std::string layout_to_json(const FactoringLayout& layout);

}  // namespace aqs
