#pragma once

// Shared test-side oracles: dense diagonalization via Eigen, product states,
// dense commutators.

#include <Eigen/Dense>
#include <vector>

#include "aqs/operator.hpp"
#include "aqs/pauli.hpp"

namespace aqs::testing {

inline Eigen::MatrixXcd as_matrix(const std::vector<cplx>& colmajor,
                                  std::size_t d) {
  return Eigen::Map<const Eigen::MatrixXcd>(colmajor.data(), d, d);
}

inline std::vector<double> eig_values(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m,
                                                     Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + m.rows());
  return out;
}

inline std::vector<double> eig_values(const PauliOperatorSum& h) {
  return eig_values(as_matrix(dense_matrix(h), h.dim()));
}

inline std::vector<double> eig_values(const LinearOperator& op) {
  return eig_values(as_matrix(dense_of(op), op.dim()));
}

inline double commutator_norm(const Eigen::MatrixXcd& a,
                              const Eigen::MatrixXcd& b) {
  return (a * b - b * a).norm();
}

// Separable state [cos(phi)|0> + sin(phi)|1>]^n over the full basis.
inline std::vector<cplx> product_state(int n, double phi) {
  const std::size_t d = std::size_t{1} << n;
  std::vector<cplx> v(d);
  const double c = std::cos(phi), s = std::sin(phi);
  for (std::size_t b = 0; b < d; ++b) {
    double amp = 1.0;
    for (int q = 0; q < n; ++q) amp *= ((b >> q) & 1) ? s : c;
    v[b] = amp;
  }
  return v;
}

}  // namespace aqs::testing
