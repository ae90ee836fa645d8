#include "aqs/entangle.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace aqs {

ReducedDensity reduced_density(const StateVector& psi, int n1) {
  const StateVector full = psi.map ? scatter(psi) : psi;
  const int n = full.n_qubits;
  if (n1 < 1 || n1 > n - 1) throw DimensionError("cut outside 1..n-1");
  if (n1 > 12) throw DimensionError("reduced density matrix dimension too large");

  const std::size_t d1 = std::size_t{1} << n1;
  const std::size_t d2 = std::size_t{1} << (n - n1);
  ReducedDensity out;
  out.n1 = n1;
  out.rho.assign(d1 * d1, cplx{0.0, 0.0});
  // rho[r, r'] = sum_c psi[r + (c << n1)] * conj(psi[r' + (c << n1)])
  for (std::size_t c = 0; c < d2; ++c) {
    const cplx* block = full.amp.data() + (c << n1);
    for (std::size_t rp = 0; rp < d1; ++rp) {
      const cplx b = std::conj(block[rp]);
      if (b == cplx{0.0, 0.0}) continue;
      for (std::size_t r = 0; r < d1; ++r) {
        out.rho[rp * d1 + r] += block[r] * b;
      }
    }
  }
  return out;
}

double entropy(const ReducedDensity& rho) {
  const std::size_t d = rho.dim();
  Eigen::Map<const Eigen::MatrixXcd> m(rho.rho.data(), d, d);
  if ((m - m.adjoint()).norm() > 1e-10) throw Error("density matrix not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > 1e-10) throw Error("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -1e-10) throw Error("density matrix not positive semidefinite");
    if (lam > 1e-14) s -= lam * std::log2(lam);
  }
  return s;
}

double chain_average_entropy(const StateVector& psi) {
  const StateVector full = psi.map ? scatter(psi) : psi;
  const int n = full.n_qubits;
  if (n < 2) throw DimensionError("chain too short for a bipartition");
  double acc = 0.0;
  for (int n1 = 1; n1 < n; ++n1) acc += entropy(reduced_density(full, n1));
  return acc / (n - 1);
}

}  // namespace aqs
