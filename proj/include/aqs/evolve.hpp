#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "aqs/pauli.hpp"
#include "aqs/state.hpp"

namespace aqs {

// Linear quench s = t/T. T == 0 is the no-evolution limit: the initial
// state is scored against the final ground space without integration.
struct QuenchSpec {
  double T = 1.0;
  // Local error per unit time. The default keeps the logged renormalization
  // drift below 1e-8 over runs of a few hundred time units; looser settings
  // trade drift (still logged) for speed.
  double tolerance = 1e-9;
  int sample_stride = 0;  // record every k-th accepted step; 0 = endpoints
};

struct TrajectorySample {
  double s = 0.0;
  double fidelity = 0.0;  // projection weight onto the final ground space
  double energy = 0.0;    // <psi|H(s)|psi>
};

struct EvolutionResult {
  StateVector final_state;
  double final_fidelity = 0.0;
  double norm_drift = 0.0;  // accumulated |1 - norm| over the run
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  std::vector<TrajectorySample> trajectory;
};

// |S>, the uniform superposition over the full basis.
StateVector prepare_conventional(int n);

// Normalized uniform superposition of the C(n, W) basis states with W
// one-bits, represented directly in the Hamming sector.
StateVector prepare_sector_state(int n, int weight);

// Projection weight sum_g |<g|psi>|^2 onto an orthonormal (sub)basis given
// in the same representation as psi.
double fidelity(const StateVector& psi,
                const std::vector<std::vector<cplx>>& ground_basis);

// Orthonormal basis of the ground cluster of h, restricted to map's sector
// when given.
std::vector<std::vector<cplx>> ground_subspace(
    const PauliOperatorSum& h, std::shared_ptr<const SubspaceMap> map = nullptr);

// Integrates i d/dt psi = H(t/T) psi with an adaptive embedded 5(4)
// Runge-Kutta pair. A sector-represented psi0 evolves inside its sector with
// both endpoint Hamiltonians restricted accordingly. Throws on step-size
// underflow.
EvolutionResult integrate(const PauliOperatorSum& h_i,
                          const PauliOperatorSum& h_f, const QuenchSpec& spec,
                          const StateVector& psi0);

struct RuntimeSearch {
  double T = 0.0;
  double fidelity = 0.0;
  bool converged = false;
  // bracketing interval when the search stops without landing in the window
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<std::pair<double, double>> probes;  // (T, final fidelity)
};

// Smallest quench time whose final fidelity falls inside the window, found
// by geometric doubling from T = 1 and bisection, within the probe budget.
RuntimeSearch runtime_for_fidelity(const PauliOperatorSum& h_i,
                                   const PauliOperatorSum& h_f,
                                   const StateVector& psi0,
                                   std::array<double, 2> window = {0.12, 0.13},
                                   double tolerance = 1e-7, int budget = 60);

}  // namespace aqs
