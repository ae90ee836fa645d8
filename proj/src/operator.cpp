#include "aqs/operator.hpp"

#include <cmath>
#include <unordered_map>

namespace aqs {

InterpolatedOperator::InterpolatedOperator(const LinearOperator& a,
                                           const LinearOperator& b, double s)
    : a_(&a), b_(&b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("interpolated endpoints have different dimensions");
  }
  set_s(s);
}

void InterpolatedOperator::set_s(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error("interpolation parameter outside [0, 1]");
  }
  s_ = s;
}

void InterpolatedOperator::apply(std::span<const cplx> in,
                                 std::span<cplx> out) const {
  if (scratch_.size() != in.size()) scratch_.resize(in.size());
  a_->apply(in, out);
  b_->apply(in, scratch_);
  const double w = 1.0 - s_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = w * out[i] + s_ * scratch_[i];
  }
}

double InterpolatedOperator::norm_bound() const {
  return (1.0 - s_) * a_->norm_bound() + s_ * b_->norm_bound();
}

namespace {

// Accumulated image of one sector basis column in the full basis, kept as a
// small hash map so restriction costs O(terms) per column.
using ColumnImage = std::unordered_map<std::uint64_t, cplx>;

void accumulate_term(ColumnImage& img, std::uint64_t source, cplx weight,
                     const std::pair<double, PauliString>& term) {
  const auto& [coef, s] = term;
  static constexpr cplx i_pow[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  cplx amp = coef * i_pow[s.y_count() & 3] * parity_sign(source & s.z) * weight;
  img[source ^ s.x] += amp;
}

}  // namespace

RestrictedOperator restrict(const PauliOperatorSum& h,
                            std::shared_ptr<const SubspaceMap> map,
                            double leak_tol) {
  if (!map || map->parent_n() != h.n_qubits()) {
    throw DimensionError("sector map does not match operator qubit count");
  }
  RestrictedOperator r;
  r.map_ = map;
  r.norm_bound_ = h.coef_norm();

  const auto& kept = map->kept_indices();
  const bool parity = map->kind() == SubspaceMap::Kind::parity;
  const std::uint64_t flip = map->flip_mask();
  const double sign = map->pair_sign();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  r.col_start_.reserve(kept.size() + 1);
  r.col_start_.push_back(0);
  ColumnImage img;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    img.clear();
    for (const auto& term : h.terms()) {
      accumulate_term(img, kept[c], 1.0, term);
      if (parity) accumulate_term(img, kept[c] ^ flip, sign, term);
    }
    for (const auto& [target, amp] : img) {
      if (std::abs(amp) < leak_tol) continue;
      auto pos = map->position(target);
      if (!pos) {
        throw SymmetryViolation("operator couples " + map->label() +
                                " sector to its complement");
      }
      if (parity) {
        // Only the representative carries the entry; the partner must hold
        // the sign-matched amplitude or the symmetric combination leaks.
        const std::uint64_t rep = kept[*pos];
        if (target != rep) continue;
        cplx partner{0.0, 0.0};
        if (auto it = img.find(rep ^ flip); it != img.end()) {
          partner = it->second;
        }
        cplx anti = (amp - sign * partner) * inv_sqrt2;
        if (std::abs(anti) > leak_tol) {
          throw SymmetryViolation("operator breaks the bit-flip symmetry of " +
                                  map->label());
        }
        r.row_.push_back(static_cast<std::uint32_t>(*pos));
        r.val_.push_back((amp + sign * partner) * 0.5);
      } else {
        r.row_.push_back(static_cast<std::uint32_t>(*pos));
        r.val_.push_back(amp);
      }
    }
    r.col_start_.push_back(r.row_.size());
  }

  // Rank-1 projectors restrict cleanly only when their vector lives entirely
  // inside or outside the sector.
  for (const auto& t : h.rank1_terms()) {
    StateVector full;
    full.n_qubits = h.n_qubits();
    full.amp = t.vec;
    StateVector sub = gather(full, map);
    double inside = sub.norm();
    if (inside > 1.0 - 1e-9) {
      r.rank1_.emplace_back(t.coef, std::move(sub.amp));
    } else if (inside > 1e-9) {
      throw SymmetryViolation("rank-1 term straddles the " + map->label() +
                              " sector boundary");
    }
  }
  return r;
}

void RestrictedOperator::apply(std::span<const cplx> in,
                               std::span<cplx> out) const {
  if (in.size() != dim() || out.size() != dim()) {
    throw DimensionError("restricted apply: vector length mismatch");
  }
  std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  for (std::size_t c = 0; c < dim(); ++c) {
    const cplx v = in[c];
    if (v == cplx{0.0, 0.0}) continue;
    for (std::size_t k = col_start_[c]; k < col_start_[c + 1]; ++k) {
      out[row_[k]] += val_[k] * v;
    }
  }
  for (const auto& [coef, vec] : rank1_) {
    cplx dot{0.0, 0.0};
    for (std::size_t i = 0; i < dim(); ++i) dot += std::conj(vec[i]) * in[i];
    dot *= coef;
    for (std::size_t i = 0; i < dim(); ++i) out[i] += dot * vec[i];
  }
}

std::vector<cplx> dense_of(const LinearOperator& op) {
  const std::size_t d = op.dim();
  if (d > 4096) {
    throw DimensionError("dense materialization limited to dimension 4096");
  }
  std::vector<cplx> mat(d * d);
  std::vector<cplx> e(d), col(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::fill(e.begin(), e.end(), cplx{0.0, 0.0});
    e[j] = 1.0;
    op.apply(e, col);
    std::copy(col.begin(), col.end(), mat.begin() + j * d);
  }
  return mat;
}

}  // namespace aqs
