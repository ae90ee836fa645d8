#include "aqs/models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "aqs/state.hpp"

namespace aqs {

namespace {

PauliOperatorSum one_minus_projector(int n, std::vector<cplx> vec) {
  PauliOperatorSum h(n);
  h.add_term(1.0, PauliString{});
  h.add_rank1(-1.0, std::move(vec));
  return h;
}

PauliString zz_bond(int n, int l) {
  PauliString s;
  s.z = (std::uint64_t{1} << l) | (std::uint64_t{1} << ((l + 1) % n));
  return s;
}

}  // namespace

std::pair<PauliOperatorSum, PauliOperatorSum> grover_hamiltonians(
    int n, std::uint64_t w) {
  if (n < 1) throw Error("grover model needs n >= 1");
  if (w >= (std::uint64_t{1} << n)) {
    throw Error("marked index out of range for " + std::to_string(n) +
                " qubits");
  }
  auto h_i = one_minus_projector(n, StateVector::uniform_superposition(n).amp);
  auto h_f = one_minus_projector(n, StateVector::basis_state(n, w).amp);
  return {std::move(h_i), std::move(h_f)};
}

double grover_gap_analytic(int n, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error("s outside [0, 1]");
  const double p = std::ldexp(1.0, -n);  // 2^-n
  return std::sqrt(1.0 - 4.0 * (1.0 - p) * s * (1.0 - s));
}

std::pair<PauliOperatorSum, PauliOperatorSum> ising_hamiltonians(int n) {
  if (n < 2) throw Error("ising chain needs n >= 2");
  PauliOperatorSum h_i(n), h_f(n);
  for (int l = 0; l < n; ++l) {
    PauliString x;
    x.x = std::uint64_t{1} << l;
    h_i.add_term(-1.0, x);
    h_f.add_term(-1.0, zz_bond(n, l));  // n=2: both bonds merge onto one string
  }
  return {std::move(h_i), std::move(h_f)};
}

std::vector<std::pair<double, double>> ising_quasiparticle_energies(int n,
                                                                    double s) {
  if (n < 2) throw Error("ising chain needs n >= 2");
  if (n % 2 != 0) {
    throw Error("quasiparticle momentum grid is defined for even n only");
  }
  if (!(s >= 0.0 && s <= 1.0)) throw Error("s outside [0, 1]");
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (int m = 0; m < n / 2; ++m) {
    const double ka = (2 * m + 1) * std::numbers::pi / n;
    const double c = std::cos(ka / 2.0);
    const double eps =
        2.0 * std::sqrt(std::max(0.0, 1.0 - 4.0 * c * c * s * (1.0 - s)));
    out.emplace_back(-ka, eps);
    out.emplace_back(ka, eps);
  }
  return out;
}

std::pair<PauliOperatorSum, PauliOperatorSum> mixed_hamiltonians(int n) {
  if (n < 2) throw Error("mixed model needs n >= 2");
  auto h_i = one_minus_projector(n, StateVector::uniform_superposition(n).amp);
  PauliOperatorSum h_f(n);
  h_f.add_term(0.5 * n, PauliString{});
  for (int l = 0; l < n; ++l) h_f.add_term(-0.5, zz_bond(n, l));
  return {std::move(h_i), std::move(h_f)};
}

LandscapeModel landscape_model_from_name(std::string_view name) {
  if (name == "grover") return LandscapeModel::grover;
  if (name == "ising") return LandscapeModel::ising;
  if (name == "mixed") return LandscapeModel::mixed;
  throw Error("unknown landscape model: " + std::string(name));
}

double landscape(LandscapeModel model, int n, double s, double phi) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error("s outside [0, 1]");
  const double c = std::cos(phi), q = std::sin(phi);
  // |<S|phi>|^2 for the product state at angle phi
  const double overlap_s = std::pow((c + q) * (c + q) / 2.0, n);
  const double m2 = (c * c - q * q) * (c * c - q * q);  // <z z>^2 per bond
  switch (model) {
    case LandscapeModel::grover:
      // marked state relabeled to 1...1, so |<w|phi>|^2 = sin^2n(phi)
      return 1.0 - (1.0 - s) * overlap_s - s * std::pow(q * q, n);
    case LandscapeModel::ising:
      return n * (-(1.0 - s) * std::sin(2.0 * phi) - s * m2);
    case LandscapeModel::mixed:
      return (1.0 - s) * (1.0 - overlap_s) + 0.5 * n * s * (1.0 - m2);
  }
  throw Error("unknown landscape model");
}

}  // namespace aqs
