#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aqs/pauli.hpp"
#include "aqs/state.hpp"
#include "aqs/rng.hpp"

using namespace aqs;

namespace {

std::vector<cplx> basis(int n, std::uint64_t b) {
  std::vector<cplx> v(std::size_t{1} << n, cplx{0.0, 0.0});
  v[b] = 1.0;
  return v;
}

double dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace

TEST_CASE("pauli string letter round trip") {
  auto s = PauliString::from_letters("XIZY");
  CHECK(s.letters(4) == "XIZY");
  CHECK(s.x == 0b1001);  // qubits 0 and 3 carry X/Y
  CHECK(s.z == 0b1100);
  CHECK(s.y_count() == 1);
  CHECK_FALSE(s.is_diagonal());
  CHECK(PauliString{}.is_identity());
  CHECK_THROWS_AS(PauliString::from_letters("XQ"), Error);
}

TEST_CASE("single-qubit actions") {
  PauliOperatorSum z(1), x(1), y(1);
  z.add_term(1.0, PauliString::from_letters("Z"));
  x.add_term(1.0, PauliString::from_letters("X"));
  y.add_term(1.0, PauliString::from_letters("Y"));

  CHECK(dist(aqs::apply(z, basis(1, 0)), basis(1, 0)) == doctest::Approx(0.0));
  auto zm = aqs::apply(z, basis(1, 1));
  CHECK(zm[1] == cplx{-1.0, 0.0});
  CHECK(dist(aqs::apply(x, basis(1, 0)), basis(1, 1)) == doctest::Approx(0.0));
  auto y0 = aqs::apply(y, basis(1, 0));
  CHECK(y0[1] == cplx{0.0, 1.0});
  auto y1 = aqs::apply(y, basis(1, 1));
  CHECK(y1[0] == cplx{0.0, -1.0});
}

TEST_CASE("ZZ is diag(1,-1,-1,1)") {
  PauliOperatorSum zz(2);
  zz.add_term(1.0, PauliString::from_letters("ZZ"));
  auto m = dense_matrix(zz);
  const double want[4] = {1.0, -1.0, -1.0, 1.0};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      cplx expect = (i == j) ? cplx{want[j], 0.0} : cplx{0.0, 0.0};
      CHECK(std::abs(m[j * 4 + i] - expect) < 1e-14);
    }
  }
  CHECK(zz.is_diagonal());
  CHECK(zz.diagonal_entry(2) == doctest::Approx(-1.0));
}

TEST_CASE("projector terms") {
  // 1 - |S><S| annihilates the uniform superposition.
  const int n = 3;
  PauliOperatorSum h(n);
  h.add_term(1.0, PauliString{});
  auto s = StateVector::uniform_superposition(n);
  h.add_rank1(-1.0, s.amp);
  auto img = aqs::apply(h, s.amp);
  for (const auto& a : img) CHECK(std::abs(a) < 1e-14);

  // 1 - |w><w| with n=2, w=3 is diag(1,1,1,0).
  PauliOperatorSum hf(2);
  hf.add_term(1.0, PauliString{});
  std::vector<cplx> w(4, cplx{0.0, 0.0});
  w[3] = 1.0;
  hf.add_rank1(-1.0, w);
  auto m = dense_matrix(hf);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(m[j * 4 + j] - cplx{j == 3 ? 0.0 : 1.0, 0.0}) < 1e-14);
  }

  CHECK_THROWS_AS(h.add_rank1(1.0, std::vector<cplx>(8, cplx{0.5, 0.0})),
                  Error);  // not unit norm
}

TEST_CASE("apply agrees with dense matrix on a random operator") {
  const int n = 6;
  const std::size_t d = std::size_t{1} << n;
  Rng rng(7);
  PauliOperatorSum h(n);
  for (int t = 0; t < 12; ++t) {
    PauliString s{rng.below(d), rng.below(d)};
    h.add_term(rng.uniform(-1.0, 1.0), s);
  }
  auto m = dense_matrix(h);
  std::vector<cplx> v(d);
  for (auto& a : v) a = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  auto fast = aqs::apply(h, v);
  std::vector<cplx> slow(d, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) slow[i] += m[j * d + i] * v[j];
  }
  CHECK(dist(fast, slow) < 1e-11);

  // Hermiticity: dense matrix equals its own adjoint.
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(std::abs(m[j * d + i] - std::conj(m[i * d + j])) < 1e-12);
    }
  }
}

TEST_CASE("term merging cancels duplicates") {
  PauliOperatorSum h(2);
  auto s = PauliString::from_letters("XZ");
  h.add_term(0.75, s);
  h.add_term(0.25, s);
  CHECK(h.terms().size() == 1);
  CHECK(h.terms()[0].first == doctest::Approx(1.0));
  h.add_term(-1.0, s);
  CHECK(h.terms().empty());
}

TEST_CASE("interpolation") {
  PauliOperatorSum a(1), b(1);
  a.add_term(2.0, PauliString::from_letters("Z"));
  b.add_term(4.0, PauliString::from_letters("X"));
  auto h = interpolate(a, b, 0.25);
  CHECK(expectation(h, basis(1, 0)) == doctest::Approx(1.5));
  CHECK_THROWS_AS(interpolate(a, b, -0.1), Error);
  CHECK_THROWS_AS(interpolate(a, b, 1.1), Error);
}

TEST_CASE("hamming weight operator counts sigma_z") {
  auto h = hamming_weight_operator(3);
  CHECK(expectation(h, basis(3, 0)) == doctest::Approx(3.0));
  CHECK(expectation(h, basis(3, 0b101)) == doctest::Approx(-1.0));
}

TEST_CASE("json round trip") {
  PauliOperatorSum h(3);
  h.add_term(-0.5, PauliString::from_letters("ZZI"));
  h.add_term(1.25, PauliString::from_letters("XIY"));
  auto s = StateVector::uniform_superposition(3);
  h.add_rank1(-1.0, s.amp);
  auto h2 = operator_from_json(to_json(h));
  CHECK(h2.n_qubits() == 3);
  auto m1 = dense_matrix(h);
  auto m2 = dense_matrix(h2);
  CHECK(dist(m1, m2) < 1e-12);
}

TEST_CASE("expectation rejects non-hermitian usage") {
  PauliOperatorSum h(1);
  h.add_term(1.0, PauliString::from_letters("Z"));
  std::vector<cplx> bad(4);  // wrong length
  CHECK_THROWS_AS(expectation(h, bad), DimensionError);
}
