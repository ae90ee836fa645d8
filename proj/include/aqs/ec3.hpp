#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aqs/pauli.hpp"

namespace aqs {

// Exact Cover 3: every clause (a, b, c) demands z_a + z_b + z_c = 1.
// Bit indices are 1-based; bit i lives at position i-1 of an assignment mask.
class Ec3Instance {
 public:
  // Clauses are stored sorted; duplicate clauses or repeated indices within
  // a clause are rejected.
  Ec3Instance(int n, std::vector<std::array<int, 3>> clauses);

  int n() const { return n_; }
  int m() const { return static_cast<int>(clauses_.size()); }
  const std::vector<std::array<int, 3>>& clauses() const { return clauses_; }

  // Generation provenance, kept so corpora can be replayed.
  std::optional<std::uint64_t> seed;
  std::optional<int> cap;

 private:
  int n_;
  std::vector<std::array<int, 3>> clauses_;
};

struct InstanceStats {
  int m = 0;
  std::vector<int> n_i;               // clause membership count per bit, 1-based at index i-1
  std::vector<std::vector<int>> n_ij;  // symmetric co-membership counts, zero diagonal
};

// Exhaustive enumeration of satisfying assignments; guarded to n <= 24.
std::vector<std::uint32_t> brute_force_solve(const Ec3Instance& inst);

// Adds random clauses until exactly one assignment survives, restarting when
// the instance goes unsatisfiable, exceeds the clause cap, or leaves a bit
// unconstrained. Deterministic in the seed.
Ec3Instance generate_unique(int n, std::uint64_t seed,
                            std::optional<int> clause_cap = std::nullopt,
                            long restart_budget = 1'000'000);

InstanceStats stats(const Ec3Instance& inst);

// Diagonal penalty: eigenvalue on z equals sum over clauses of
// (z_a + z_b + z_c - 1)^2. Ground energy 0 iff satisfiable.
PauliOperatorSum final_hamiltonian(const Ec3Instance& inst);

// sum_i n_i/2 (1 - sigma^x_i); requires every bit to appear in a clause.
PauliOperatorSum conventional_initial(const Ec3Instance& inst);

// Planar ferromagnet -sum_{i<j} n_ij/2 (XX + YY); conserves total sigma^z.
PauliOperatorSum xy_initial(const Ec3Instance& inst);

// Isotropic ferromagnet -sum_{i<j} n_ij/2 (XX + YY + ZZ).
PauliOperatorSum xyz_initial(const Ec3Instance& inst);

// Number of one-bits in the unique solution; throws if not unique.
int solution_weight(const Ec3Instance& inst);

std::string instance_to_json(const Ec3Instance& inst);
Ec3Instance instance_from_json(const std::string& text);

}  // namespace aqs
