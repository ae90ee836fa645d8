#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aqs/common.hpp"

namespace aqs {

// Tensor product of single-qubit Paulis, encoded as two bitmasks.
// Bit q of `x` set means an X or Y acts on qubit q; bit q of `z` means Z or Y.
// Qubit q corresponds to bit q of a computational-basis index, with
// |0> the sigma_z = +1 eigenstate.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString from_letters(std::string_view letters);
  std::string letters(int n_qubits) const;

  bool is_identity() const { return x == 0 && z == 0; }
  bool is_diagonal() const { return x == 0; }
  int y_count() const { return popcount64(x & z); }

  friend auto operator<=>(const PauliString&, const PauliString&) = default;
};

// c * |v><v| applied matrix-free via a single inner product.
struct Rank1Term {
  double coef = 0.0;
  std::vector<cplx> vec;  // unit norm, length 2^n
};

// Weighted sum of Pauli strings with real coefficients, plus optional
// rank-1 projector terms. Immutable once handed out; apply() is const
// and thread-safe.
class PauliOperatorSum {
 public:
  explicit PauliOperatorSum(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }

  // Merges duplicate strings and drops terms whose coefficient cancels.
  void add_term(double coef, PauliString s);
  void add_rank1(double coef, std::vector<cplx> vec);

  const std::vector<std::pair<double, PauliString>>& terms() const {
    return terms_;
  }
  const std::vector<Rank1Term>& rank1_terms() const { return rank1_; }

  // out = H * in over the full 2^n basis. Unnormalized image.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;

  // Sum of |coef| over all terms; cheap upper bound on the spectral radius.
  double coef_norm() const;

  // True when every term is diagonal in the computational basis.
  bool is_diagonal() const;

  // Diagonal matrix element <b|H|b> (Pauli terms only; rank-1 included).
  double diagonal_entry(std::uint64_t basis_index) const;

 private:
  struct Plan;  // cached per-dimension application plan
  const Plan& plan() const;

  int n_qubits_;
  std::vector<std::pair<double, PauliString>> terms_;
  std::vector<Rank1Term> rank1_;
  // Copying/moving an operator does not carry the lock; the cached plan is
  // immutable and safe to share.
  struct PlanMutex : std::mutex {
    PlanMutex() = default;
    PlanMutex(const PlanMutex&) {}
    PlanMutex& operator=(const PlanMutex&) { return *this; }
  };
  mutable std::shared_ptr<const Plan> plan_;
  mutable PlanMutex plan_mutex_;
};

// H.n_qubits must match psi's length; returns H*psi (not normalized).
std::vector<cplx> apply(const PauliOperatorSum& h, std::span<const cplx> psi);

// Re<psi|H|psi> for a normalized psi. Throws if the imaginary part
// exceeds 1e-10.
double expectation(const PauliOperatorSum& h, std::span<const cplx> psi);

// (1-s)*H_I + s*H_F with merged terms; s outside [0,1] is rejected.
PauliOperatorSum interpolate(const PauliOperatorSum& h_i,
                             const PauliOperatorSum& h_f, double s);

// Sum_i sigma^z_i.
PauliOperatorSum hamming_weight_operator(int n);

// Dense Hermitian matrix, column-major, dim x dim. Guarded to 2^n <= 4096.
std::vector<cplx> dense_matrix(const PauliOperatorSum& h);

// JSON round trip: {n_qubits, terms:[{coef, string}], rank1:[{coef, vec}]}.
// Rank-1 vectors are emitted only for n <= 12.
std::string to_json(const PauliOperatorSum& h);
PauliOperatorSum operator_from_json(const std::string& text);

}  // namespace aqs
