#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "aqs/common.hpp"

namespace aqs {

// Symmetry sector of the full 2^n computational basis.
//
// hamming(W): the coordinate subspace of basis states with exactly W one-bits.
// parity(even/odd): the +-1 eigenspace of the global bit-flip i -> ~i. Basis
// vectors are (|r> + sign*|~r>)/sqrt(2) with one representative r < ~r per
// orbit; kept_indices stores the representatives.
class SubspaceMap {
 public:
  enum class Kind { hamming, parity };

  static SubspaceMap hamming(int n, int weight);
  static SubspaceMap parity(int n, bool even);

  int parent_n() const { return parent_n_; }
  Kind kind() const { return kind_; }
  int hamming_weight() const { return weight_; }
  bool even() const { return even_; }
  double pair_sign() const { return even_ ? 1.0 : -1.0; }
  std::uint64_t flip_mask() const {
    return (std::uint64_t{1} << parent_n_) - 1;
  }

  std::size_t dim() const { return kept_.size(); }
  const std::vector<std::uint64_t>& kept_indices() const { return kept_; }

  // Position of a full-basis index within the sector; for parity sectors the
  // index may be either orbit member (position of its representative).
  std::optional<std::size_t> position(std::uint64_t index) const;

  std::string label() const;

 private:
  SubspaceMap() = default;
  int parent_n_ = 0;
  Kind kind_ = Kind::hamming;
  int weight_ = 0;
  bool even_ = true;
  std::vector<std::uint64_t> kept_;
  std::unordered_map<std::uint64_t, std::size_t> pos_;
};

// Complex amplitude vector, either over the full 2^n basis (map == nullptr)
// or over a symmetry sector. Public operations keep the norm at 1 +- 1e-12.
struct StateVector {
  std::vector<cplx> amp;
  int n_qubits = 0;
  std::shared_ptr<const SubspaceMap> map;  // null for the full basis

  std::size_t dim() const { return amp.size(); }
  bool sector_represented() const { return map != nullptr; }

  double norm() const;
  void normalize();

  static StateVector zero_full(int n);
  static StateVector basis_state(int n, std::uint64_t index);
  // Uniform superposition |S> over all 2^n basis states.
  static StateVector uniform_superposition(int n);
};

cplx inner(const StateVector& a, const StateVector& b);

// Embed a sector-represented state into the full basis.
StateVector scatter(const StateVector& sub);
// Project a full-basis state onto a sector (not renormalized).
StateVector gather(const StateVector& full, std::shared_ptr<const SubspaceMap> map);

}  // namespace aqs
