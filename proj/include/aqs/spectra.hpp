#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aqs/operator.hpp"
#include "aqs/pauli.hpp"
#include "aqs/state.hpp"

namespace aqs {

struct EigenResult {
  std::vector<double> values;              // ascending
  std::vector<std::vector<cplx>> vectors;  // matching order, unit norm
};

struct LowestOptions {
  int count = 2;
  // residual target is residual_scale * max(1, |H| estimate)
  double residual_scale = 1e-9;
  int max_krylov = 250;
  int restarts = 8;
  bool extend_degenerate = true;  // return whole cluster at the boundary
  bool force_iterative = false;   // testing hook; default picks by dimension
  std::uint64_t seed = 0x5eed;
  // previous eigenvectors at a nearby interpolation point, used as starts
  const std::vector<std::vector<cplx>>* warm_start = nullptr;
};

// The `count` algebraically smallest eigenpairs. Dense for small dimensions;
// otherwise Lanczos with full reorthogonalization and deflation, falling back
// to dense up to dimension 4096. Throws ConvergenceError with the best
// residual when the budget runs out.
EigenResult lowest_eigenpairs(const LinearOperator& h,
                              const LowestOptions& opts);
EigenResult lowest_eigenpairs(const LinearOperator& h, int count);
EigenResult lowest_eigenpairs(const PauliOperatorSum& h, int count,
                              std::shared_ptr<const SubspaceMap> map = nullptr);

struct GapProfile {
  std::vector<double> s;
  std::vector<double> e0, e1, e2;  // e2 empty when two levels requested
  std::string subspace_label;
};

struct CriticalFit {
  double s_crit = 0.0;
  double g_min = 0.0;
  double c_min = 0.0;  // quadratic coefficient of g(s) at the minimum
  // parabola (value, slope, curvature) of each level at s_crit
  std::array<double, 3> e0_fit{};
  std::array<double, 3> e1_fit{};
  double gap_slope_residual = 0.0;  // |g'(s_crit)| from the fit
  double fit_window = 0.0;
  bool multiple_minima_warning = false;
  std::string subspace_label;
};

struct MinGapOptions {
  double tol_s = 1e-5;
  int gap_index = 1;        // >1 skips a degenerate final ground cluster
  int coarse_points = 101;
  double window_scale = 1.0;  // shrink/grow the parabola-fit window
};

// Locates the single isolated minimum of g(s) = E_gap_index(s) - E0(s) by a
// coarse scan, bracketing, and golden-section search, then fits quartic
// polynomials to the two levels over a curvature-scaled window (11 samples).
CriticalFit find_min_gap(const PauliOperatorSum& h_i,
                         const PauliOperatorSum& h_f,
                         std::shared_ptr<const SubspaceMap> map = nullptr,
                         MinGapOptions opts = {});

// sqrt(c_min / g_min^3); the adiabatic runtime scale of the quench.
double runtime_estimate(const CriticalFit& fit);

GapProfile gap_curve(const PauliOperatorSum& h_i, const PauliOperatorSum& h_f,
                     const std::vector<double>& grid,
                     std::shared_ptr<const SubspaceMap> map = nullptr,
                     int levels = 3);

}  // namespace aqs
