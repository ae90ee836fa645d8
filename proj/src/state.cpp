#include "aqs/state.hpp"

#include <cmath>

namespace aqs {

SubspaceMap SubspaceMap::hamming(int n, int weight) {
  if (n < 1 || n > 30) throw DimensionError("qubit count out of range");
  if (weight < 0 || weight > n) throw DimensionError("invalid Hamming weight");
  SubspaceMap m;
  m.parent_n_ = n;
  m.kind_ = Kind::hamming;
  m.weight_ = weight;
  const std::uint64_t d = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < d; ++b)
    if (popcount64(b) == weight) m.kept_.push_back(b);
  for (std::size_t p = 0; p < m.kept_.size(); ++p) m.pos_[m.kept_[p]] = p;
  return m;
}

SubspaceMap SubspaceMap::parity(int n, bool even) {
  if (n < 1 || n > 30) throw DimensionError("qubit count out of range");
  SubspaceMap m;
  m.parent_n_ = n;
  m.kind_ = Kind::parity;
  m.even_ = even;
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t b = 0; b <= mask; ++b)
    if (b < (b ^ mask)) m.kept_.push_back(b);
  for (std::size_t p = 0; p < m.kept_.size(); ++p) {
    m.pos_[m.kept_[p]] = p;
    m.pos_[m.kept_[p] ^ mask] = p;
  }
  return m;
}

std::optional<std::size_t> SubspaceMap::position(std::uint64_t index) const {
  const auto it = pos_.find(index);
  if (it == pos_.end()) return std::nullopt;
  return it->second;
}

std::string SubspaceMap::label() const {
  if (kind_ == Kind::hamming)
    return "hamming(" + std::to_string(weight_) + ")";
  return even_ ? "parity(even)" : "parity(odd)";
}

double StateVector::norm() const {
  double n2 = 0.0;
  for (const cplx& a : amp) n2 += std::norm(a);
  return std::sqrt(n2);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw Error("cannot normalize zero vector");
  for (cplx& a : amp) a /= n;
}

StateVector StateVector::zero_full(int n) {
  StateVector s;
  s.n_qubits = n;
  s.amp.assign(std::size_t{1} << n, cplx{0.0, 0.0});
  return s;
}

StateVector StateVector::basis_state(int n, std::uint64_t index) {
  StateVector s = zero_full(n);
  s.amp.at(index) = 1.0;
  return s;
}

StateVector StateVector::uniform_superposition(int n) {
  StateVector s = zero_full(n);
  const double a = 1.0 / std::sqrt(static_cast<double>(s.amp.size()));
  for (cplx& v : s.amp) v = a;
  return s;
}

cplx inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
  cplx r{0.0, 0.0};
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    r += std::conj(a.amp[i]) * b.amp[i];
  return r;
}

StateVector scatter(const StateVector& sub) {
  if (!sub.map) return sub;
  const SubspaceMap& m = *sub.map;
  StateVector full = StateVector::zero_full(m.parent_n());
  const auto& kept = m.kept_indices();
  if (m.kind() == SubspaceMap::Kind::hamming) {
    for (std::size_t p = 0; p < kept.size(); ++p) full.amp[kept[p]] = sub.amp[p];
  } else {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double sign = m.pair_sign();
    const std::uint64_t mask = m.flip_mask();
    for (std::size_t p = 0; p < kept.size(); ++p) {
      full.amp[kept[p]] = sub.amp[p] * inv_sqrt2;
      full.amp[kept[p] ^ mask] = sign * sub.amp[p] * inv_sqrt2;
    }
  }
  return full;
}

StateVector gather(const StateVector& full,
                   std::shared_ptr<const SubspaceMap> map) {
  if (full.map) throw DimensionError("gather expects a full-basis state");
  if (full.n_qubits != map->parent_n())
    throw DimensionError("gather: qubit count mismatch");
  StateVector sub;
  sub.n_qubits = map->parent_n();
  sub.map = map;
  const auto& kept = map->kept_indices();
  sub.amp.resize(kept.size());
  if (map->kind() == SubspaceMap::Kind::hamming) {
    for (std::size_t p = 0; p < kept.size(); ++p) sub.amp[p] = full.amp[kept[p]];
  } else {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double sign = map->pair_sign();
    const std::uint64_t mask = map->flip_mask();
    for (std::size_t p = 0; p < kept.size(); ++p)
      sub.amp[p] =
          inv_sqrt2 * (full.amp[kept[p]] + sign * full.amp[kept[p] ^ mask]);
  }
  return sub;
}

}  // namespace aqs
