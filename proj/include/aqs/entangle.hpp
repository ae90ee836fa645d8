#pragma once

#include <vector>

#include "aqs/state.hpp"

namespace aqs {

// Reduced density matrix of the first n1 qubits (a contiguous prefix cut of
// the chain, qubits 0..n1-1 = low bits). Hermitian, PSD, unit trace.
struct ReducedDensity {
  int n1 = 0;
  std::vector<cplx> rho;  // column-major, 2^{n1} x 2^{n1}

  std::size_t dim() const { return std::size_t{1} << n1; }
};

// Partial trace over the trailing n - n1 qubits, computed from the
// 2^{n1} x 2^{n-n1} amplitude reshape. Sector-represented states are
// scattered into the full basis first (cuts do not respect sectors).
ReducedDensity reduced_density(const StateVector& psi, int n1);

// Von Neumann entropy -Tr(rho log2 rho) in bits. Eigenvalues below 1e-14
// are treated as exact zeros.
double entropy(const ReducedDensity& rho);

// Mean entropy over the n-1 prefix cuts n1 = 1..n-1.
double chain_average_entropy(const StateVector& psi);

}  // namespace aqs
