#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "aqs/pauli.hpp"

namespace aqs {

// Closed-form reference models: unstructured search, the transverse-field
// Ising chain, and the mixed case (search-type start, ferromagnetic finish).
// These have known spectra and serve as oracles for the numeric machinery.

// H_I = 1 - |S><S| (uniform superposition), H_F = 1 - |w><w|.
std::pair<PauliOperatorSum, PauliOperatorSum> grover_hamiltonians(
    int n, std::uint64_t w);

// Fundamental gap sqrt(1 - 4(1 - 2^-n) s(1-s)) of the search Hamiltonian.
double grover_gap_analytic(int n, double s);

// H_I = -sum sigma^x_l, H_F = -sum sigma^z_l sigma^z_{l+1}, periodic.
// n = 2 double-counts the single bond (the literal wraparound sum).
std::pair<PauliOperatorSum, PauliOperatorSum> ising_hamiltonians(int n);

// Quasiparticle energies eps_k(s) = 2 sqrt(1 - 4 cos^2(ka/2) s(1-s)) on the
// antiperiodic momentum grid ka = +-(2m+1) pi/n, m = 0..n/2-1. Even n only.
std::vector<std::pair<double, double>> ising_quasiparticle_energies(int n,
                                                                    double s);

// H_I = 1 - |S><S|, H_F = sum 1/2 (1 - sigma^z_l sigma^z_{l+1}), periodic.
std::pair<PauliOperatorSum, PauliOperatorSum> mixed_hamiltonians(int n);

enum class LandscapeModel { grover, ising, mixed };

LandscapeModel landscape_model_from_name(std::string_view name);

// Energy of the separable state [cos(phi)|0> + sin(phi)|1>]^n under H(s).
// For the search model the marked state is canonically relabeled to 1...1.
double landscape(LandscapeModel model, int n, double s, double phi);

}  // namespace aqs
