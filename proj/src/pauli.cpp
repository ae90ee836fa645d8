#include "aqs/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace aqs {

namespace {

constexpr double kMergeEps = 0.0;  // exact-zero drop after merging

cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliString PauliString::from_letters(std::string_view letters) {
  if (letters.size() > 64) throw DimensionError("Pauli string longer than 64 qubits");
  PauliString s;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (letters[q]) {
      case 'I': break;
      case 'X': s.x |= bit; break;
      case 'Y': s.x |= bit; s.z |= bit; break;
      case 'Z': s.z |= bit; break;
      default:
        throw Error(std::string("invalid Pauli letter '") + letters[q] + "'");
    }
  }
  return s;
}

std::string PauliString::letters(int n_qubits) const {
  std::string out(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = 0; q < n_qubits; ++q) {
    const bool xb = (x >> q) & 1, zb = (z >> q) & 1;
    if (xb && zb) out[q] = 'Y';
    else if (xb) out[q] = 'X';
    else if (zb) out[q] = 'Z';
  }
  return out;
}

struct PauliOperatorSum::Plan {
  struct OffDiag {
    std::uint64_t x, z;
    cplx scale;  // coef * i^{#Y}
  };
  std::vector<double> diagonal;  // length dim, from identity + Z-only terms
  std::vector<OffDiag> offdiag;
};

PauliOperatorSum::PauliOperatorSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 30)
    throw DimensionError("qubit count out of range");
}

void PauliOperatorSum::add_term(double coef, PauliString s) {
  if (!std::isfinite(coef)) throw Error("non-finite coefficient");
  const std::uint64_t mask =
      n_qubits_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_qubits_) - 1);
  if ((s.x | s.z) & ~mask)
    throw DimensionError("Pauli string exceeds qubit count");
  plan_.reset();
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].second == s) {
      terms_[i].first += coef;
      if (std::abs(terms_[i].first) <= kMergeEps)
        terms_.erase(terms_.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
  }
  if (coef != 0.0) terms_.emplace_back(coef, s);
}

void PauliOperatorSum::add_rank1(double coef, std::vector<cplx> vec) {
  if (vec.size() != dim())
    throw DimensionError("rank-1 vector dimension mismatch");
  double norm2 = 0.0;
  for (const cplx& a : vec) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-10)
    throw Error("rank-1 vector must have unit norm");
  plan_.reset();
  rank1_.push_back(Rank1Term{coef, std::move(vec)});
}

const PauliOperatorSum::Plan& PauliOperatorSum::plan() const {
  std::lock_guard<std::mutex> lock(plan_mutex_);
  if (!plan_) {
    auto p = std::make_shared<Plan>();
    const std::size_t d = dim();
    std::vector<std::pair<double, std::uint64_t>> diag_terms;
    for (const auto& [coef, s] : terms_) {
      if (s.is_diagonal())
        diag_terms.emplace_back(coef, s.z);
      else
        p->offdiag.push_back({s.x, s.z, coef * i_power(s.y_count())});
    }
    if (!diag_terms.empty()) {
      p->diagonal.assign(d, 0.0);
      for (const auto& [coef, z] : diag_terms)
        for (std::size_t b = 0; b < d; ++b)
          p->diagonal[b] += coef * parity_sign(b & z);
    }
    plan_ = std::move(p);
  }
  return *plan_;
}

void PauliOperatorSum::apply(std::span<const cplx> in,
                             std::span<cplx> out) const {
  const std::size_t d = dim();
  if (in.size() != d || out.size() != d)
    throw DimensionError("apply: state dimension mismatch");
  const Plan& p = plan();
  if (!p.diagonal.empty()) {
    for (std::size_t b = 0; b < d; ++b) out[b] = p.diagonal[b] * in[b];
  } else {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  }
  for (const auto& t : p.offdiag) {
    for (std::size_t b = 0; b < d; ++b) {
      const double sign = parity_sign(b & t.z);
      out[b ^ t.x] += t.scale * sign * in[b];
    }
  }
  for (const auto& r : rank1_) {
    cplx inner{0.0, 0.0};
    for (std::size_t b = 0; b < d; ++b) inner += std::conj(r.vec[b]) * in[b];
    const cplx w = r.coef * inner;
    for (std::size_t b = 0; b < d; ++b) out[b] += w * r.vec[b];
  }
}

double PauliOperatorSum::coef_norm() const {
  double n = 0.0;
  for (const auto& [c, s] : terms_) n += std::abs(c);
  for (const auto& r : rank1_) n += std::abs(r.coef);
  return n;
}

bool PauliOperatorSum::is_diagonal() const {
  if (!rank1_.empty()) return false;
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.second.is_diagonal(); });
}

double PauliOperatorSum::diagonal_entry(std::uint64_t b) const {
  double v = 0.0;
  for (const auto& [coef, s] : terms_)
    if (s.is_diagonal()) v += coef * parity_sign(b & s.z);
  for (const auto& r : rank1_) v += r.coef * std::norm(r.vec[b]);
  return v;
}

std::vector<cplx> apply(const PauliOperatorSum& h, std::span<const cplx> psi) {
  std::vector<cplx> out(h.dim());
  h.apply(psi, out);
  return out;
}

double expectation(const PauliOperatorSum& h, std::span<const cplx> psi) {
  const auto image = apply(h, psi);
  cplx e{0.0, 0.0};
  for (std::size_t b = 0; b < image.size(); ++b)
    e += std::conj(psi[b]) * image[b];
  if (std::abs(e.imag()) > 1e-10)
    throw Error("expectation has non-negligible imaginary part");
  return e.real();
}

PauliOperatorSum interpolate(const PauliOperatorSum& h_i,
                             const PauliOperatorSum& h_f, double s) {
  if (h_i.n_qubits() != h_f.n_qubits())
    throw DimensionError("interpolate: qubit counts differ");
  if (!(s >= 0.0 && s <= 1.0))
    throw Error("interpolation parameter outside [0,1]");
  PauliOperatorSum h(h_i.n_qubits());
  for (const auto& [c, t] : h_i.terms()) h.add_term((1.0 - s) * c, t);
  for (const auto& [c, t] : h_f.terms()) h.add_term(s * c, t);
  for (const auto& r : h_i.rank1_terms()) h.add_rank1((1.0 - s) * r.coef, r.vec);
  for (const auto& r : h_f.rank1_terms()) h.add_rank1(s * r.coef, r.vec);
  return h;
}

PauliOperatorSum hamming_weight_operator(int n) {
  PauliOperatorSum h(n);
  for (int q = 0; q < n; ++q)
    h.add_term(1.0, PauliString{0, std::uint64_t{1} << q});
  return h;
}

std::vector<cplx> dense_matrix(const PauliOperatorSum& h) {
  const std::size_t d = h.dim();
  if (d > 4096) throw DimensionError("dense_matrix limited to 2^n <= 4096");
  std::vector<cplx> mat(d * d, cplx{0.0, 0.0});
  std::vector<cplx> basis(d), col(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::fill(basis.begin(), basis.end(), cplx{0.0, 0.0});
    basis[j] = 1.0;
    h.apply(basis, col);
    for (std::size_t i = 0; i < d; ++i) mat[j * d + i] = col[i];
  }
  return mat;
}

std::string to_json(const PauliOperatorSum& h) {
  nlohmann::json j;
  j["n_qubits"] = h.n_qubits();
  j["terms"] = nlohmann::json::array();
  for (const auto& [coef, s] : h.terms())
    j["terms"].push_back({{"coef", coef}, {"string", s.letters(h.n_qubits())}});
  if (!h.rank1_terms().empty()) {
    if (h.n_qubits() > 12)
      throw Error("rank-1 vectors serialized only for n <= 12");
    j["rank1"] = nlohmann::json::array();
    for (const auto& r : h.rank1_terms()) {
      nlohmann::json v = nlohmann::json::array();
      for (const cplx& a : r.vec) v.push_back({a.real(), a.imag()});
      j["rank1"].push_back({{"coef", r.coef}, {"vec", std::move(v)}});
    }
  }
  return j.dump();
}

PauliOperatorSum operator_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PauliOperatorSum h(j.at("n_qubits").get<int>());
  for (const auto& t : j.at("terms"))
    h.add_term(t.at("coef").get<double>(),
               PauliString::from_letters(t.at("string").get<std::string>()));
  if (j.contains("rank1")) {
    for (const auto& r : j["rank1"]) {
      std::vector<cplx> vec;
      for (const auto& a : r.at("vec"))
        vec.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
      h.add_rank1(r.at("coef").get<double>(), std::move(vec));
    }
  }
  return h;
}

}  // namespace aqs
