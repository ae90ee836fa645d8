#include "aqs/factoring.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>

namespace aqs {

std::string FactorVar::name() const {
  switch (kind) {
    case Kind::a:
      return "a" + std::to_string(i);
    case Kind::b:
      return "b" + std::to_string(i);
    case Kind::S:
      return "S" + std::to_string(i) + "," + std::to_string(j);
    case Kind::z:
      return "z" + std::to_string(i) + "," + std::to_string(j);
  }
  return "?";
}

namespace {

// A resolved symbol: either a fixed bit or a kept variable.
struct Ref {
  int qubit = -1;
  int value = 0;
  bool is_const() const { return qubit < 0; }
};

struct Builder {
  int n, k, nk;
  bool odd;
  std::vector<int> w;  // w[1..n], w[1] = most significant product bit
  std::map<FactorVar, int> index;

  Ref constant(int v) const { return Ref{-1, v}; }

  Ref var(FactorVar v) const {
    auto it = index.find(v);
    if (it == index.end()) throw Error("unregistered variable " + v.name());
    return Ref{it->second, 0};
  }

  Ref resolve_a(int i) const {
    if (odd && (i == 1 || i == k)) return constant(1);
    return var({FactorVar::Kind::a, i, 0});
  }
  Ref resolve_b(int j) const {
    if (odd && (j == 1 || j == nk)) return constant(1);
    return var({FactorVar::Kind::b, j, 0});
  }
  // Closure order matters: the i = k+1 row reads product bits regardless of j.
  Ref resolve_s(int i, int j) const {
    if (i == k + 1) return constant(w[k + j + 1]);
    if (j == 0) return constant(w[i]);
    if (j == nk) return constant(0);
    if (i == 1 && j == nk - 1) return constant(0);
    if (odd && j == nk - 1 && i >= 2 && i <= k) return resolve_a(i - 1);
    return var({FactorVar::Kind::S, i, j});
  }
  Ref resolve_z(int i, int j) const {
    if (i == 0) return resolve_s(1, j - 1);  // carry alias
    if (i == k) return constant(0);
    if (j == nk) return constant(0);
    return var({FactorVar::Kind::z, i, j});
  }

  bool s_survives(int i, int j) const {
    if (j < 1 || j > nk - 1 || i < 1 || i > k) return false;
    if (i == 1 && j == nk - 1) return false;
    if (odd && j == nk - 1 && i >= 2) return false;
    return true;
  }
};

}  // namespace

FactoringLayout build_layout(std::uint64_t omega, int n, int k,
                             bool odd_reduced) {
  if (n < 4 || k < 2 || k > n - 2) {
    throw Error("factoring partition needs 2 <= k <= n-2");
  }
  if (omega == 0 || omega >= (std::uint64_t{1} << n)) {
    throw Error("omega does not fit in " + std::to_string(n) + " bits");
  }
  if (odd_reduced && omega % 2 == 0) {
    throw Error("the odd reduction requires odd omega");
  }

  Builder b;
  b.n = n;
  b.k = k;
  b.nk = n - k;
  b.odd = odd_reduced;
  b.w.assign(n + 1, 0);
  for (int i = 1; i <= n; ++i) b.w[i] = (omega >> (n - i)) & 1;

  FactoringLayout layout;
  layout.n_ = n;
  layout.k_ = k;
  layout.omega_ = omega;
  layout.odd_reduced_ = odd_reduced;

  // canonical qubit order: a-bits, b-bits, S-grid, z-grid
  auto keep = [&](FactorVar v) {
    b.index[v] = static_cast<int>(layout.qubit_vars_.size());
    layout.qubit_vars_.push_back(v);
  };
  for (int i = 1; i <= k; ++i) {
    if (!(odd_reduced && (i == 1 || i == k))) keep({FactorVar::Kind::a, i, 0});
  }
  for (int j = 1; j <= b.nk; ++j) {
    if (!(odd_reduced && (j == 1 || j == b.nk))) keep({FactorVar::Kind::b, j, 0});
  }
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= b.nk - 1; ++j) {
      if (b.s_survives(i, j)) keep({FactorVar::Kind::S, i, j});
    }
  }
  for (int i = 1; i <= k - 1; ++i) {
    for (int j = 1; j <= b.nk - 1; ++j) keep({FactorVar::Kind::z, i, j});
  }

  int emitted_product_free = 0;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= b.nk; ++j) {
      Ref pa = b.resolve_a(i), pb = b.resolve_b(j);
      std::map<int, int> lin;
      int c = 0;
      std::optional<std::pair<int, int>> product;
      if (pa.is_const() && pb.is_const()) {
        c += pa.value * pb.value;
      } else if (pa.is_const() || pb.is_const()) {
        const Ref& cv = pa.is_const() ? pa : pb;
        const Ref& vv = pa.is_const() ? pb : pa;
        if (cv.value == 1) lin[vv.qubit] += 1;
      } else {
        product = {pa.qubit, pb.qubit};
      }
      const std::pair<int, Ref> parts[] = {
          {1, b.resolve_s(i, j)},
          {1, b.resolve_z(i, j)},
          {-1, b.resolve_s(i + 1, j - 1)},
          {-2, b.resolve_z(i - 1, j)},
      };
      for (const auto& [coef, ref] : parts) {
        if (ref.is_const()) {
          c += coef * ref.value;
        } else {
          lin[ref.qubit] += coef;
        }
      }
      std::erase_if(lin, [](const auto& kv) { return kv.second == 0; });

      if (!product && lin.empty() && c == 0) continue;  // folded away
      FactorEquation eq;
      eq.product = product;
      eq.constant = c;
      for (const auto& [q, coef] : lin) eq.linear.emplace_back(coef, q);
      if (eq.product_free()) ++emitted_product_free;
      layout.equations_.push_back(std::move(eq));
    }
  }
  // definitional last-column equations, eliminated by the odd reduction,
  // count as product-free; the redundant corner cell (i = k) does not
  layout.product_free_count_ =
      emitted_product_free + (odd_reduced ? k - 1 : 0);
  return layout;
}

std::pair<std::uint64_t, std::uint64_t> FactoringLayout::decode(
    std::uint64_t assignment) const {
  auto bit_of = [&](FactorVar::Kind kind, int idx) -> int {
    if (odd_reduced_) {
      const int len = (kind == FactorVar::Kind::a) ? k_ : n_ - k_;
      if (idx == 1 || idx == len) return 1;
    }
    for (std::size_t q = 0; q < qubit_vars_.size(); ++q) {
      if (qubit_vars_[q].kind == kind && qubit_vars_[q].i == idx) {
        return (assignment >> q) & 1;
      }
    }
    throw Error("factor bit not present in layout");
  };
  std::uint64_t a = 0, b = 0;
  for (int i = 1; i <= k_; ++i) a = (a << 1) | bit_of(FactorVar::Kind::a, i);
  for (int j = 1; j <= n_ - k_; ++j) b = (b << 1) | bit_of(FactorVar::Kind::b, j);
  return {a, b};
}

Rational penalty(const FactorEquation& eq, std::uint64_t assignment) {
  Rational s(eq.constant);
  for (const auto& [coef, q] : eq.linear) {
    s += Rational(coef * static_cast<int>((assignment >> q) & 1));
  }
  if (eq.product_free()) return s * s;
  const int a = (assignment >> eq.product->first) & 1;
  const int z = (assignment >> eq.product->second) & 1;
  Rational l = Rational(2 * (a + z) - 1, 4) + s;
  return Rational(2) * l * l - Rational(1, 8);
}

namespace {

// Total penalty accumulated exactly in the sigma^z basis:
//   c0 + sum cz[q] sigma_q + sum_{p<q} czz[{p,q}] sigma_p sigma_q
struct SigmaAccum {
  Rational c0;
  std::vector<Rational> cz;
  std::map<std::pair<int, int>, Rational> czz;
};

SigmaAccum expand(const FactoringLayout& layout) {
  SigmaAccum acc;
  acc.cz.assign(layout.n_qubits(), Rational(0));
  for (const auto& eq : layout.equations()) {
    // linear polynomial in z-variables whose square gives the penalty
    Rational pc(eq.constant);
    std::map<int, Rational> pv;
    for (const auto& [coef, q] : eq.linear) pv[q] += Rational(coef);
    Rational qf(1), residual(0);
    if (!eq.product_free()) {
      pv[eq.product->first] += Rational(1, 2);
      pv[eq.product->second] += Rational(1, 2);
      pc -= Rational(1, 4);
      qf = Rational(2);
      residual = Rational(-1, 8);
    }
    // square with z^2 = z, then z_q = (1 - sigma_q)/2
    Rational zc = pc * pc;
    std::map<int, Rational> zl;
    std::map<std::pair<int, int>, Rational> zq;
    for (const auto& [u, cu] : pv) zl[u] += Rational(2) * pc * cu + cu * cu;
    for (auto it = pv.begin(); it != pv.end(); ++it) {
      for (auto jt = std::next(it); jt != pv.end(); ++jt) {
        zq[{it->first, jt->first}] += Rational(2) * it->second * jt->second;
      }
    }
    acc.c0 += qf * zc + residual;
    for (const auto& [u, cu] : zl) {
      acc.c0 += qf * cu * Rational(1, 2);
      acc.cz[u] -= qf * cu * Rational(1, 2);
    }
    for (const auto& [uv, cq] : zq) {
      Rational quarter = qf * cq * Rational(1, 4);
      acc.c0 += quarter;
      acc.cz[uv.first] -= quarter;
      acc.cz[uv.second] -= quarter;
      acc.czz[uv] += quarter;
    }
  }
  return acc;
}

}  // namespace

PauliOperatorSum penalty_hamiltonian(const FactoringLayout& layout) {
  auto acc = expand(layout);
  PauliOperatorSum h(layout.n_qubits());
  h.add_term(acc.c0.to_double(), PauliString{});
  for (int q = 0; q < layout.n_qubits(); ++q) {
    if (acc.cz[q] == Rational(0)) continue;
    PauliString s;
    s.z = std::uint64_t{1} << q;
    h.add_term(acc.cz[q].to_double(), s);
  }
  for (const auto& [uv, c] : acc.czz) {
    if (c == Rational(0)) continue;
    PauliString s;
    s.z = (std::uint64_t{1} << uv.first) | (std::uint64_t{1} << uv.second);
    h.add_term(c.to_double(), s);
  }
  return h;
}

QuadraticForm to_quadratic(const FactoringLayout& layout) {
  auto acc = expand(layout);
  const int nq = layout.n_qubits();
  QuadraticForm q;
  q.h = acc.c0.to_double();
  q.h_i.resize(nq);
  for (int i = 0; i < nq; ++i) q.h_i[i] = acc.cz[i].to_double();
  q.h_ij.assign(nq, std::vector<double>(nq, 0.0));
  for (const auto& [uv, c] : acc.czz) {
    const double half = c.to_double() / 2.0;  // the explicit 2 in the form
    q.h_ij[uv.first][uv.second] = half;
    q.h_ij[uv.second][uv.first] = half;
  }
  return q;
}

PauliOperatorSum reconstruct(const QuadraticForm& q) {
  const int nq = static_cast<int>(q.h_i.size());
  PauliOperatorSum h(nq);
  h.add_term(q.h, PauliString{});
  for (int i = 0; i < nq; ++i) {
    if (q.h_i[i] == 0.0) continue;
    PauliString s;
    s.z = std::uint64_t{1} << i;
    h.add_term(q.h_i[i], s);
  }
  for (int i = 0; i < nq; ++i) {
    for (int j = i + 1; j < nq; ++j) {
      if (q.h_ij[i][j] == 0.0) continue;
      PauliString s;
      s.z = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
      h.add_term(2.0 * q.h_ij[i][j], s);
    }
  }
  return h;
}

InitialSet initial_hamiltonians(const QuadraticForm& q) {
  const int nq = static_cast<int>(q.h_i.size());
  PauliOperatorSum x(nq), xy(nq), xyz(nq);
  x.add_term(0.5 * nq, PauliString{});
  for (int i = 0; i < nq; ++i) {
    PauliString s;
    s.x = std::uint64_t{1} << i;
    x.add_term(-0.5, s);
  }
  for (int i = 0; i < nq; ++i) {
    for (int j = i + 1; j < nq; ++j) {
      const double w = std::abs(q.h_ij[i][j]);
      if (w == 0.0) continue;
      PauliString xx, yy, zz;
      xx.x = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
      yy.x = yy.z = xx.x;
      zz.z = xx.x;
      // ordered-pair sum over (i,j) and (j,i) folded onto i<j
      xy.add_term(w, PauliString{});
      xy.add_term(-0.5 * w, xx);
      xy.add_term(-0.5 * w, yy);
      xyz.add_term(0.5 * w, PauliString{});
      xyz.add_term(-0.5 * w, xx);
      xyz.add_term(-0.5 * w, yy);
      xyz.add_term(-0.5 * w, zz);
    }
  }
  return InitialSet{std::move(x), std::move(xy), std::move(xyz)};
}

GroundSearch brute_force_ground(const FactoringLayout& layout) {
  const int nq = layout.n_qubits();
  if (nq > 24) throw DimensionError("ground search guarded to 24 qubits");
  // penalties are integer multiples of 1/8; accumulate in eighths
  std::int64_t best = INT64_MAX;
  const auto& eqs = layout.equations();
  std::vector<std::uint64_t> minimizers;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << nq); ++a) {
    std::int64_t total = 0;
    for (const auto& eq : eqs) {
      std::int64_t s = eq.constant;
      for (const auto& [coef, q] : eq.linear) s += coef * ((a >> q) & 1);
      if (eq.product_free()) {
        total += 8 * s * s;
      } else {
        // eighths of 2[(A+B-1/2)/2 + S]^2 - 1/8 collapse to t^2 - 1
        const std::int64_t t = 4 * s + 2 * (((a >> eq.product->first) & 1) +
                                            ((a >> eq.product->second) & 1)) -
                               1;
        total += t * t - 1;
      }
      if (total > best) break;
    }
    if (total < best) {
      best = total;
      minimizers.clear();
    }
    if (total == best) minimizers.push_back(a);
  }
  GroundSearch out;
  out.energy = Rational(best, 8);
  out.assignments = minimizers;
  for (auto a : minimizers) out.factors.push_back(layout.decode(a));
  return out;
}

NaiveReport naive_hamiltonian_coefficients(int n, int k) {
  if (n < 4 || k < 2 || k > n - 2) {
    throw Error("factoring partition needs 2 <= k <= n-2");
  }
  if (n > 20) throw DimensionError("coefficient audit guarded to n <= 20");
  NaiveReport r;
  r.n = n;
  r.k = k;
  const int nk = n - k;
  // audit at the largest odd n-bit product, the worst case for (omega-ab)^2
  const std::int64_t omega = (std::int64_t{1} << n) - 1;

  // multilinear expansion of (omega - ab)^2 over the factor bits, z^2 = z
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> coeff;
  coeff[{0, 0}] += omega * omega;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < nk; ++j) {
      coeff[{1u << i, 1u << j}] -= 2 * omega * (std::int64_t{1} << (i + j));
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int i2 = 0; i2 < k; ++i2) {
      for (int j = 0; j < nk; ++j) {
        for (int j2 = 0; j2 < nk; ++j2) {
          coeff[{(1u << i) | (1u << i2), (1u << j) | (1u << j2)}] +=
              std::int64_t{1} << (i + i2 + j + j2);
        }
      }
    }
  }
  double cmax = 0.0, cmin = 0.0;
  for (const auto& [mono, c] : coeff) {
    if (mono.first == 0 && mono.second == 0) continue;
    const double m = std::abs(static_cast<double>(c));
    if (m == 0.0) continue;
    cmax = std::max(cmax, m);
    cmin = (cmin == 0.0) ? m : std::min(cmin, m);
  }
  r.square_coeff_max = cmax;
  r.square_coeff_min = cmin;

  double emax = 0.0, emin = std::numeric_limits<double>::infinity();
  for (std::int64_t a = 0; a < (std::int64_t{1} << k); ++a) {
    // extreme b for fixed a is at a boundary or nearest to omega/a
    std::vector<std::int64_t> bs = {0, (std::int64_t{1} << nk) - 1};
    if (a > 0) {
      for (std::int64_t d : {std::int64_t{0}, std::int64_t{1}}) {
        std::int64_t b = omega / a + d;
        if (b >= 0 && b < (std::int64_t{1} << nk)) bs.push_back(b);
      }
    }
    for (std::int64_t b : bs) {
      const double e = static_cast<double>(omega - a * b) *
                       static_cast<double>(omega - a * b);
      emax = std::max(emax, e);
      emin = std::min(emin, e);
    }
  }
  r.square_width = emax - emin;
  r.hamming_width = n;
  r.cell_width_bound = 21.0 * k * nk;
  return r;
}

std::string layout_to_json(const FactoringLayout& layout) {
  nlohmann::json j;
  j["omega"] = layout.omega();
  j["n"] = layout.n();
  j["k"] = layout.k();
  j["odd_reduced"] = layout.odd_reduced();
  j["n_qubits"] = layout.n_qubits();
  std::vector<std::string> names;
  for (const auto& v : layout.qubit_vars()) names.push_back(v.name());
  j["qubits"] = names;
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& eq : layout.equations()) {
    nlohmann::json e;
    if (eq.product) e["product"] = {eq.product->first, eq.product->second};
    e["linear"] = eq.linear;
    e["constant"] = eq.constant;
    eqs.push_back(e);
  }
  j["equations"] = eqs;
  auto q = to_quadratic(layout);
  j["quadratic"] = {{"h", q.h}, {"h_i", q.h_i}, {"h_ij", q.h_ij}};
  return j.dump(2);
}

}  // namespace aqs
