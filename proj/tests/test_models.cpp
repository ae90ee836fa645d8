#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aqs/models.hpp"
#include "aqs/state.hpp"
#include "helpers.hpp"

using namespace aqs;
using namespace aqs::testing;

TEST_CASE("search model basics") {
  auto [hi, hf] = grover_hamiltonians(1, 1);
  auto m = as_matrix(dense_matrix(hf), 2);
  CHECK(std::abs(m(0, 0) - cplx{1.0, 0.0}) < 1e-14);
  CHECK(std::abs(m(1, 1)) < 1e-14);

  // H_I annihilates |S>
  auto s = StateVector::uniform_superposition(1);
  auto img = aqs::apply(hi, s.amp);
  CHECK(std::abs(img[0]) + std::abs(img[1]) < 1e-14);

  CHECK_THROWS_AS(grover_hamiltonians(2, 4), Error);
}

TEST_CASE("search spectrum: N-2 flat levels at 1") {
  auto [hi, hf] = grover_hamiltonians(2, 3);
  for (double s : {0.2, 0.5, 0.8}) {
    auto ev = eig_values(interpolate(hi, hf, s));
    REQUIRE(ev.size() == 4);
    CHECK(ev[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("analytic search gap") {
  CHECK(grover_gap_analytic(5, 0.0) == doctest::Approx(1.0));
  CHECK(grover_gap_analytic(1, 0.5) == doctest::Approx(std::sqrt(0.5)));
  CHECK(grover_gap_analytic(10, 0.5) == doctest::Approx(0.03125));

  // n=3, s=1/2: gap 2^{-3/2}
  auto [hi, hf] = grover_hamiltonians(3, 5);
  auto ev = eig_values(interpolate(hi, hf, 0.5));
  CHECK(ev[1] - ev[0] == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-10));
}

TEST_CASE("analytic gap matches dense diagonalization, n <= 10") {
  for (int n = 1; n <= 10; ++n) {
    auto [hi, hf] = grover_hamiltonians(n, (std::uint64_t{1} << n) - 1);
    for (int k = 0; k <= 100; ++k) {
      const double s = k / 100.0;
      auto ev = eig_values(interpolate(hi, hf, s));
      CHECK(std::abs((ev[1] - ev[0]) - grover_gap_analytic(n, s)) < 1e-10);
    }
  }
}

TEST_CASE("ising chain endpoints") {
  auto [hi, hf] = ising_hamiltonians(2);
  // the single bond is double-counted by the literal wraparound sum
  auto ev = eig_values(hf);
  CHECK(ev[0] == doctest::Approx(-2.0));
  CHECK_THROWS_AS(ising_hamiltonians(1), Error);
}

TEST_CASE("ising commutes with global bit flip") {
  const int n = 4;
  auto [hi, hf] = ising_hamiltonians(n);
  PauliOperatorSum flip(n);
  flip.add_term(1.0, PauliString::from_letters("XXXX"));
  auto f = as_matrix(dense_matrix(flip), 16);
  for (double s : {0.0, 0.37, 1.0}) {
    auto h = as_matrix(dense_matrix(interpolate(hi, hf, s)), 16);
    CHECK(commutator_norm(h, f) < 1e-12);
  }
}

TEST_CASE("even-sector ground state at s=1 is the cat state") {
  const int n = 4;
  auto [hi, hf] = ising_hamiltonians(n);
  auto par = std::make_shared<SubspaceMap>(SubspaceMap::parity(n, true));
  auto r = restrict(hf, par);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      as_matrix(dense_of(r), r.dim()));
  // unique sector ground state, all weight on the 0/15 orbit representative
  CHECK(es.eigenvalues()(1) - es.eigenvalues()(0) > 1e-6);
  auto pos = par->position(0);
  REQUIRE(pos.has_value());
  CHECK(std::abs(es.eigenvectors()(Eigen::Index(*pos), 0)) ==
        doctest::Approx(1.0));
}

TEST_CASE("quasiparticle energies") {
  auto qs = ising_quasiparticle_energies(6, 0.0);
  CHECK(qs.size() == 6);
  for (auto [ka, eps] : qs) {
    CHECK(eps == doctest::Approx(2.0));
    CHECK(std::abs(ka) < std::numbers::pi);
    CHECK(std::abs(ka) > 0.0);
  }
  auto q4 = ising_quasiparticle_energies(4, 0.5);
  double want = 2.0 * std::sin(std::numbers::pi / 8.0);
  bool found = false;
  for (auto [ka, eps] : q4) {
    if (std::abs(ka - std::numbers::pi / 4.0) < 1e-12) {
      CHECK(eps == doctest::Approx(want).epsilon(1e-10));
      found = true;
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(ising_quasiparticle_energies(5, 0.5), Error);
}

TEST_CASE("even-sector spectrum equals the free-fermion reconstruction") {
  for (int n : {4, 6, 8}) {
    auto [hi, hf] = ising_hamiltonians(n);
    auto par = std::make_shared<SubspaceMap>(SubspaceMap::parity(n, true));
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      auto r = restrict(interpolate(hi, hf, s), par);
      auto dense = eig_values(r);

      auto qs = ising_quasiparticle_energies(n, s);
      double e0 = 0.0;
      for (auto [ka, eps] : qs) e0 -= 0.5 * eps;
      std::vector<double> recon;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) % 2 != 0) continue;
        double e = e0;
        for (int k = 0; k < n; ++k) {
          if (mask & (1u << k)) e += qs[k].second;
        }
        recon.push_back(e);
      }
      std::sort(recon.begin(), recon.end());
      REQUIRE(recon.size() == dense.size());
      for (std::size_t i = 0; i < recon.size(); ++i) {
        CHECK(std::abs(recon[i] - dense[i]) < 1e-8);
      }
    }
  }
}

TEST_CASE("mixed model") {
  const int n = 4;
  auto [hi, hf] = mixed_hamiltonians(n);
  auto ev = eig_values(hf);
  CHECK(ev[0] == doctest::Approx(0.0));
  CHECK(ev[1] == doctest::Approx(0.0));
  CHECK(ev[2] > 1e-9);  // exactly two-fold degenerate ground space

  PauliOperatorSum flip(n);
  flip.add_term(1.0, PauliString::from_letters("XXXX"));
  CHECK(commutator_norm(as_matrix(dense_matrix(hf), 16),
                        as_matrix(dense_matrix(flip), 16)) < 1e-12);
}

TEST_CASE("mixed model has a single avoided crossing in the even sector") {
  const int n = 8;
  auto [hi, hf] = mixed_hamiltonians(n);
  auto par = std::make_shared<SubspaceMap>(SubspaceMap::parity(n, true));
  std::vector<double> gap;
  for (int k = 1; k < 40; ++k) {
    auto r = restrict(interpolate(hi, hf, k / 40.0), par);
    auto ev = eig_values(r);
    gap.push_back(ev[1] - ev[0]);
  }
  int minima = 0;
  for (std::size_t i = 1; i + 1 < gap.size(); ++i) {
    if (gap[i] < gap[i - 1] && gap[i] < gap[i + 1]) ++minima;
  }
  CHECK(minima == 1);
}

TEST_CASE("landscape trivial points and mirror symmetry") {
  const double pi = std::numbers::pi;
  CHECK(landscape(LandscapeModel::grover, 7, 1.0, pi / 2) ==
        doctest::Approx(0.0));
  CHECK(landscape(LandscapeModel::ising, 9, 0.0, pi / 4) ==
        doctest::Approx(-9.0));
  for (auto model : {LandscapeModel::ising, LandscapeModel::mixed}) {
    for (double s : {0.0, 0.3, 0.6, 1.0}) {
      for (double d : {0.05, 0.2, 0.6}) {
        CHECK(landscape(model, 6, s, pi / 4 + d) ==
              doctest::Approx(landscape(model, 6, s, pi / 4 - d))
                  .epsilon(1e-12));
      }
    }
  }
  CHECK(landscape_model_from_name("grover") == LandscapeModel::grover);
  CHECK_THROWS_AS(landscape_model_from_name("bogus"), Error);
}

TEST_CASE("search landscape equals the exact product-state expectation") {
  for (int n : {2, 5, 10}) {
    auto [hi, hf] = grover_hamiltonians(n, (std::uint64_t{1} << n) - 1);
    for (double s : {0.0, 0.25, 0.5, 0.9}) {
      auto h = interpolate(hi, hf, s);
      for (double phi : {0.1, 0.5, 1.0, 1.5}) {
        double exact = expectation(h, product_state(n, phi));
        CHECK(std::abs(landscape(LandscapeModel::grover, n, s, phi) - exact) <
              1e-12);
      }
    }
  }
}

TEST_CASE("search landscape minima stay separated by a barrier") {
  const int n = 10;
  const int grid = 2000;
  for (int si = 1; si < 20; ++si) {
    const double s = si / 20.0;
    std::vector<double> e(grid + 1);
    for (int i = 0; i <= grid; ++i) {
      e[i] = landscape(LandscapeModel::grover, n, s,
                       (std::numbers::pi / 2) * i / grid);
    }
    // local minima, treating endpoints as candidates
    std::vector<int> minima;
    for (int i = 0; i <= grid; ++i) {
      double left = (i == 0) ? e[1] : e[i - 1];
      double right = (i == grid) ? e[grid - 1] : e[i + 1];
      if (e[i] < left && e[i] < right) minima.push_back(i);
    }
    REQUIRE(!minima.empty());
    if (minima.size() >= 2) {
      for (std::size_t k = 0; k + 1 < minima.size(); ++k) {
        double barrier = *std::max_element(e.begin() + minima[k],
                                           e.begin() + minima[k + 1] + 1);
        CHECK(barrier >
              std::max(e[minima[k]], e[minima[k + 1]]) + 1e-6);
      }
    }
  }
}
