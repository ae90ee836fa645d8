#include "aqs/ec3.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>

#include "aqs/rng.hpp"

namespace aqs {

namespace {

bool satisfies(std::uint32_t assignment, const std::array<int, 3>& clause) {
  int ones = 0;
  for (int b : clause) ones += (assignment >> (b - 1)) & 1;
  return ones == 1;
}

PauliString zz(int i, int j) {  // 1-based
  PauliString s;
  s.z = (std::uint64_t{1} << (i - 1)) | (std::uint64_t{1} << (j - 1));
  return s;
}

}  // namespace

Ec3Instance::Ec3Instance(int n, std::vector<std::array<int, 3>> clauses)
    : n_(n), clauses_(std::move(clauses)) {
  if (n_ < 3) throw Error("exact-cover instance needs n >= 3");
  for (auto& c : clauses_) {
    std::sort(c.begin(), c.end());
    if (c[0] < 1 || c[2] > n_) throw Error("clause index out of range");
    if (c[0] == c[1] || c[1] == c[2]) {
      throw Error("clause indices must be distinct");
    }
  }
  std::sort(clauses_.begin(), clauses_.end());
  if (std::adjacent_find(clauses_.begin(), clauses_.end()) != clauses_.end()) {
    throw Error("duplicate clause");
  }
}

std::vector<std::uint32_t> brute_force_solve(const Ec3Instance& inst) {
  if (inst.n() > 24) throw DimensionError("brute force guarded to n <= 24");
  std::vector<std::uint32_t> out;
  const std::uint32_t top = std::uint32_t{1} << inst.n();
  for (std::uint32_t a = 0; a < top; ++a) {
    bool ok = true;
    for (const auto& c : inst.clauses()) {
      if (!satisfies(a, c)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(a);
  }
  return out;
}

Ec3Instance generate_unique(int n, std::uint64_t seed,
                            std::optional<int> clause_cap,
                            long restart_budget) {
  if (n < 4) throw Error("unique-instance generation needs n >= 4");
  if (n > 24) throw DimensionError("generation guarded to n <= 24");
  Rng rng(seed);
  std::vector<std::uint32_t> all(std::size_t{1} << n);
  std::iota(all.begin(), all.end(), 0u);

  for (long attempt = 0; attempt < restart_budget; ++attempt) {
    std::vector<std::array<int, 3>> clauses;
    std::vector<std::uint32_t> alive = all;
    bool failed = false;
    while (alive.size() > 1) {
      if (clause_cap && static_cast<int>(clauses.size()) >= *clause_cap) {
        failed = true;  // cap reached with several solutions left
        break;
      }
      std::array<int, 3> c;
      c[0] = rng.range(1, n);
      do {
        c[1] = rng.range(1, n);
      } while (c[1] == c[0]);
      do {
        c[2] = rng.range(1, n);
      } while (c[2] == c[0] || c[2] == c[1]);
      std::sort(c.begin(), c.end());
      if (std::find(clauses.begin(), clauses.end(), c) != clauses.end()) {
        continue;
      }
      clauses.push_back(c);
      std::erase_if(alive,
                    [&](std::uint32_t a) { return !satisfies(a, c); });
    }
    if (failed || alive.empty()) continue;  // unsatisfiable or over the cap

    Ec3Instance inst(n, clauses);
    auto st = stats(inst);
    if (std::find(st.n_i.begin(), st.n_i.end(), 0) != st.n_i.end()) {
      continue;  // unconstrained bit
    }
    inst.seed = seed;
    inst.cap = clause_cap;
    return inst;
  }
  throw ConvergenceError("instance generation restart budget exhausted", 0.0);
}

InstanceStats stats(const Ec3Instance& inst) {
  InstanceStats st;
  st.m = inst.m();
  st.n_i.assign(inst.n(), 0);
  st.n_ij.assign(inst.n(), std::vector<int>(inst.n(), 0));
  for (const auto& c : inst.clauses()) {
    for (int b : c) ++st.n_i[b - 1];
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        ++st.n_ij[c[a] - 1][c[b] - 1];
        ++st.n_ij[c[b] - 1][c[a] - 1];
      }
    }
  }
  return st;
}

PauliOperatorSum final_hamiltonian(const Ec3Instance& inst) {
  auto st = stats(inst);
  PauliOperatorSum h(inst.n());
  h.add_term(static_cast<double>(st.m), PauliString{});
  for (int i = 1; i <= inst.n(); ++i) {
    if (st.n_i[i - 1] == 0) continue;
    PauliString z;
    z.z = std::uint64_t{1} << (i - 1);
    h.add_term(-0.5 * st.n_i[i - 1], z);
  }
  for (int i = 1; i <= inst.n(); ++i) {
    for (int j = i + 1; j <= inst.n(); ++j) {
      if (st.n_ij[i - 1][j - 1] == 0) continue;
      h.add_term(0.5 * st.n_ij[i - 1][j - 1], zz(i, j));
    }
  }
  return h;
}

PauliOperatorSum conventional_initial(const Ec3Instance& inst) {
  auto st = stats(inst);
  PauliOperatorSum h(inst.n());
  double total = 0.0;
  for (int i = 1; i <= inst.n(); ++i) {
    if (st.n_i[i - 1] == 0) {
      throw Error("bit " + std::to_string(i) +
                  " appears in no clause; conventional start undefined");
    }
    PauliString x;
    x.x = std::uint64_t{1} << (i - 1);
    h.add_term(-0.5 * st.n_i[i - 1], x);
    total += 0.5 * st.n_i[i - 1];
  }
  h.add_term(total, PauliString{});
  return h;
}

namespace {

PauliOperatorSum ferromagnet(const Ec3Instance& inst, bool with_zz) {
  auto st = stats(inst);
  PauliOperatorSum h(inst.n());
  for (int i = 1; i <= inst.n(); ++i) {
    for (int j = i + 1; j <= inst.n(); ++j) {
      const int nij = st.n_ij[i - 1][j - 1];
      if (nij == 0) continue;
      const double c = -0.5 * nij;
      PauliString xx, yy;
      xx.x = yy.x = (std::uint64_t{1} << (i - 1)) | (std::uint64_t{1} << (j - 1));
      yy.z = yy.x;
      h.add_term(c, xx);
      h.add_term(c, yy);
      if (with_zz) h.add_term(c, zz(i, j));
    }
  }
  return h;
}

}  // namespace

PauliOperatorSum xy_initial(const Ec3Instance& inst) {
  return ferromagnet(inst, false);
}

PauliOperatorSum xyz_initial(const Ec3Instance& inst) {
  return ferromagnet(inst, true);
}

int solution_weight(const Ec3Instance& inst) {
  auto sols = brute_force_solve(inst);
  if (sols.size() != 1) {
    throw Error("instance has " + std::to_string(sols.size()) +
                " solutions; weight defined only for unique instances");
  }
  return popcount64(sols[0]);
}

std::string instance_to_json(const Ec3Instance& inst) {
  nlohmann::json j;
  j["n"] = inst.n();
  j["clauses"] = inst.clauses();
  if (inst.seed) j["seed"] = *inst.seed;
  if (inst.cap) j["cap"] = *inst.cap;
  return j.dump(2);
}

Ec3Instance instance_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Ec3Instance inst(j.at("n").get<int>(),
                   j.at("clauses").get<std::vector<std::array<int, 3>>>());
  if (j.contains("seed")) inst.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("cap")) inst.cap = j["cap"].get<int>();
  return inst;
}

}  // namespace aqs
