#pragma once

#include <memory>
#include <vector>

#include "aqs/pauli.hpp"
#include "aqs/state.hpp"

namespace aqs {

// Matrix-free Hermitian operator interface shared by the eigensolvers and
// the time integrator.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dim() const = 0;
  virtual void apply(std::span<const cplx> in, std::span<cplx> out) const = 0;
  // Cheap upper bound on the spectral radius, used for residual scaling.
  virtual double norm_bound() const = 0;
};

// Full-basis view of a PauliOperatorSum (non-owning).
class FullOperator final : public LinearOperator {
 public:
  explicit FullOperator(const PauliOperatorSum& h) : h_(&h) {}
  std::size_t dim() const override { return h_->dim(); }
  void apply(std::span<const cplx> in, std::span<cplx> out) const override {
    h_->apply(in, out);
  }
  double norm_bound() const override { return h_->coef_norm(); }
  const PauliOperatorSum& op() const { return *h_; }

 private:
  const PauliOperatorSum* h_;
};

// (1-s)*A + s*B without merging the underlying operators.
class InterpolatedOperator final : public LinearOperator {
 public:
  InterpolatedOperator(const LinearOperator& a, const LinearOperator& b,
                       double s);
  std::size_t dim() const override { return a_->dim(); }
  void apply(std::span<const cplx> in, std::span<cplx> out) const override;
  double norm_bound() const override;
  void set_s(double s);
  double s() const { return s_; }

 private:
  const LinearOperator* a_;
  const LinearOperator* b_;
  double s_;
  mutable std::vector<cplx> scratch_;
};

// Exact restriction of a Pauli operator sum to a symmetry sector, built by
// gathering/scattering through the sector's index map. Construction verifies
// that the operator does not couple the sector to its complement.
class RestrictedOperator final : public LinearOperator {
 public:
  std::size_t dim() const override { return map_->dim(); }
  void apply(std::span<const cplx> in, std::span<cplx> out) const override;
  double norm_bound() const override { return norm_bound_; }
  const SubspaceMap& map() const { return *map_; }
  std::shared_ptr<const SubspaceMap> map_ptr() const { return map_; }

  friend RestrictedOperator restrict(const PauliOperatorSum& h,
                                     std::shared_ptr<const SubspaceMap> map,
                                     double leak_tol);

 private:
  std::shared_ptr<const SubspaceMap> map_;
  double norm_bound_ = 0.0;
  // compressed sparse column storage
  std::vector<std::size_t> col_start_;
  std::vector<std::uint32_t> row_;
  std::vector<cplx> val_;
  std::vector<std::pair<double, std::vector<cplx>>> rank1_;  // gathered
};

// Throws SymmetryViolation if H couples the sector to its complement.
RestrictedOperator restrict(const PauliOperatorSum& h,
                            std::shared_ptr<const SubspaceMap> map,
                            double leak_tol = 1e-10);

// Dense matrix of any LinearOperator (column major); guarded to dim <= 4096.
std::vector<cplx> dense_of(const LinearOperator& op);

}  // namespace aqs
