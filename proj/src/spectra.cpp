#include "aqs/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "aqs/rng.hpp"

namespace aqs {

namespace {

constexpr std::size_t kDenseDefault = 512;   // dense below this, always
constexpr std::size_t kDenseFallback = 4096;  // dense rescue after failures

void axpy(std::vector<cplx>& y, cplx a, const std::vector<cplx>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double nrm(const std::vector<cplx>& a) { return std::sqrt(std::real(dot(a, a))); }

void orthogonalize(std::vector<cplx>& w,
                   const std::vector<std::vector<cplx>>& basis) {
  for (const auto& v : basis) axpy(w, -dot(v, w), v);
}

EigenResult dense_lowest(const LinearOperator& h, int count,
                         bool extend_degenerate, double cluster_tol) {
  const std::size_t d = h.dim();
  Eigen::MatrixXcd m =
      Eigen::Map<const Eigen::MatrixXcd>(dense_of(h).data(), d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  int take = count;
  if (extend_degenerate) {
    while (take < static_cast<int>(d) &&
           es.eigenvalues()(take) - es.eigenvalues()(take - 1) < cluster_tol) {
      ++take;
    }
  }
  EigenResult out;
  for (int i = 0; i < take; ++i) {
    out.values.push_back(es.eigenvalues()(i));
    auto col = es.eigenvectors().col(i);
    out.vectors.emplace_back(col.data(), col.data() + d);
  }
  return out;
}

struct RitzPair {
  double value;
  std::vector<cplx> vec;
  double residual;
};

// One deflated Lanczos sweep with full reorthogonalization. Returns the
// smallest Ritz pair of the deflated operator together with its exact
// residual; the caller decides whether it converged.
RitzPair lanczos_sweep(const LinearOperator& h,
                       const std::vector<std::vector<cplx>>& deflate,
                       std::vector<cplx> start, int max_m, double btol) {
  const std::size_t d = h.dim();
  orthogonalize(start, deflate);
  double norm0 = nrm(start);
  if (norm0 < 1e-12) throw ConvergenceError("lanczos start vector vanished", 1.0);
  for (auto& a : start) a /= norm0;

  std::vector<std::vector<cplx>> v{start};
  std::vector<double> alpha, beta;
  std::vector<cplx> w(d);
  const int m_cap = std::min<int>(max_m, static_cast<int>(d - deflate.size()));

  Eigen::VectorXd ritz_y;
  double ritz_val = 0.0;
  int m_used = 0;
  for (int j = 0; j < m_cap; ++j) {
    h.apply(v[j], w);
    alpha.push_back(std::real(dot(v[j], w)));
    // Full reorthogonalization, twice. The deflated directions must be
    // removed after the Krylov basis: the basis vectors carry tiny leaks of
    // the deflated states, and projecting onto them re-injects those leaks,
    // which would compound exponentially over the sweep if left last.
    orthogonalize(w, v);
    orthogonalize(w, deflate);
    orthogonalize(w, v);
    orthogonalize(w, deflate);
    const double b = nrm(w);
    // The tridiagonal eigensolve is O(j^3); doing it every step would
    // dominate the sweep, so convergence is only checked periodically.
    const bool check = b < btol || (j + 1) % 8 == 0 || j + 1 == m_cap;
    if (check) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), j + 1);
      Eigen::VectorXd sub(j);
      for (int t = 0; t < j; ++t) sub(t) = beta[t];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub);
      ritz_val = es.eigenvalues()(0);
      ritz_y = es.eigenvectors().col(0);
      m_used = j + 1;
      const double est = b * std::abs(ritz_y(j));
      // A tiny b means the Krylov space is numerically invariant; pushing on
      // would normalize roundoff and resurrect deflated directions as
      // ghosts, so the cut is relative to the operator scale.
      if (b < btol || est < btol) break;
    }
    beta.push_back(b);
    for (auto& a : w) a /= b;
    v.push_back(w);
  }

  RitzPair out;
  out.value = ritz_val;
  out.vec.assign(d, cplx{0.0, 0.0});
  for (int t = 0; t < m_used; ++t) axpy(out.vec, ritz_y(t), v[t]);
  orthogonalize(out.vec, deflate);
  double vn = nrm(out.vec);
  if (vn < 1e-12) throw ConvergenceError("ritz vector collapsed", 1.0);
  for (auto& a : out.vec) a /= vn;
  h.apply(out.vec, w);
  axpy(w, -cplx{out.value, 0.0}, out.vec);
  out.residual = nrm(w);
  return out;
}

EigenResult iterative_lowest(const LinearOperator& h,
                             const LowestOptions& opts, double tol,
                             double cluster_tol) {
  Rng rng(opts.seed);
  const std::size_t d = h.dim();
  auto random_start = [&] {
    std::vector<cplx> v(d);
    for (auto& a : v) a = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return v;
  };

  EigenResult out;
  std::vector<std::vector<cplx>> deflate;
  const int hard_cap =
      std::min<int>(static_cast<int>(d), opts.count + 8);
  double best_residual = 1e300;
  const double btol = std::max(1e-14, 0.1 * tol);
  auto extract_one = [&] {
    const int idx = static_cast<int>(out.values.size());
    std::vector<cplx> start;
    if (opts.warm_start && idx < static_cast<int>(opts.warm_start->size()) &&
        (*opts.warm_start)[idx].size() == d) {
      start = (*opts.warm_start)[idx];
    } else {
      start = random_start();
    }
    bool accepted = false;
    for (int r = 0; r <= opts.restarts; ++r) {
      auto pair =
          lanczos_sweep(h, deflate, std::move(start), opts.max_krylov, btol);
      best_residual = std::min(best_residual, pair.residual);
      if (pair.residual <= tol) {
        // extractions can land slightly out of order; keep ascending
        auto pos = std::upper_bound(out.values.begin(), out.values.end(),
                                    pair.value);
        out.vectors.insert(out.vectors.begin() + (pos - out.values.begin()),
                           pair.vec);
        out.values.insert(pos, pair.value);
        deflate.push_back(std::move(pair.vec));
        accepted = true;
        break;
      }
      start = std::move(pair.vec);  // restart from the best Ritz vector
    }
    if (!accepted) {
      throw ConvergenceError("eigensolver restart budget exhausted",
                             best_residual);
    }
  };

  while (static_cast<int>(out.values.size()) < opts.count) extract_one();
  // peek past the boundary to return a degenerate cluster whole
  while (opts.extend_degenerate &&
         static_cast<int>(out.values.size()) < hard_cap) {
    extract_one();
    if (out.values.back() - out.values[opts.count - 1] >= cluster_tol) {
      out.values.pop_back();
      out.vectors.pop_back();
      break;
    }
  }
  return out;
}

}  // namespace

EigenResult lowest_eigenpairs(const LinearOperator& h,
                              const LowestOptions& opts) {
  const std::size_t d = h.dim();
  if (opts.count < 1 || opts.count > static_cast<int>(d)) {
    throw DimensionError("eigenpair count out of range");
  }
  const double scale = std::max(1.0, h.norm_bound());
  const double tol = opts.residual_scale * scale;
  const double cluster_tol = 1e-8 * scale;
  if (!opts.force_iterative && d <= kDenseDefault) {
    return dense_lowest(h, opts.count, opts.extend_degenerate, cluster_tol);
  }
  try {
    return iterative_lowest(h, opts, tol, cluster_tol);
  } catch (const ConvergenceError&) {
    if (d <= kDenseFallback) {
      return dense_lowest(h, opts.count, opts.extend_degenerate, cluster_tol);
    }
    throw;
  }
}

EigenResult lowest_eigenpairs(const LinearOperator& h, int count) {
  LowestOptions o;
  o.count = count;
  return lowest_eigenpairs(h, o);
}

EigenResult lowest_eigenpairs(const PauliOperatorSum& h, int count,
                              std::shared_ptr<const SubspaceMap> map) {
  if (map) {
    auto r = restrict(h, map);
    return lowest_eigenpairs(r, count);
  }
  FullOperator op(h);
  return lowest_eigenpairs(op, count);
}

namespace {

// Endpoint pair along the interpolation path, restricted once if a sector
// map is given, with warm-started eigenpair evaluation.
class PathOps {
 public:
  PathOps(const PauliOperatorSum& h_i, const PauliOperatorSum& h_f,
          std::shared_ptr<const SubspaceMap> map) {
    if (map) {
      ra_.emplace(restrict(h_i, map));
      rb_.emplace(restrict(h_f, map));
      a_ = &*ra_;
      b_ = &*rb_;
      label_ = map->label();
    } else {
      fa_.emplace(h_i);
      fb_.emplace(h_f);
      a_ = &*fa_;
      b_ = &*fb_;
      label_ = "full";
    }
  }

  const std::string& label() const { return label_; }

  EigenResult eval(double s, int count) {
    InterpolatedOperator op(*a_, *b_, s);
    LowestOptions o;
    o.count = count;
    o.extend_degenerate = false;  // gap_index already addresses degeneracy
    o.warm_start = warm_.empty() ? nullptr : &warm_;
    auto r = lowest_eigenpairs(op, o);
    warm_ = r.vectors;
    return r;
  }

 private:
  std::optional<RestrictedOperator> ra_, rb_;
  std::optional<FullOperator> fa_, fb_;
  const LinearOperator* a_ = nullptr;
  const LinearOperator* b_ = nullptr;
  std::string label_;
  std::vector<std::vector<cplx>> warm_;
};

// least-squares polynomial fit, constant coefficient first
Eigen::VectorXd poly_fit(const std::vector<double>& x,
                         const std::vector<double>& y, int deg) {
  Eigen::MatrixXd m(x.size(), deg + 1);
  Eigen::VectorXd rhs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k <= deg; ++k, p *= x[i]) m(i, k) = p;
    rhs(i) = y[i];
  }
  return m.colPivHouseholderQr().solve(rhs);
}

}  // namespace

CriticalFit find_min_gap(const PauliOperatorSum& h_i,
                         const PauliOperatorSum& h_f,
                         std::shared_ptr<const SubspaceMap> map,
                         MinGapOptions opts) {
  if (opts.coarse_points < 5) throw Error("coarse grid too small");
  PathOps path(h_i, h_f, map);
  const int count = opts.gap_index + 1;
  auto gap_at = [&](double s) {
    auto r = path.eval(s, count);
    if (static_cast<int>(r.values.size()) <= opts.gap_index) {
      throw Error("sector too small for the requested gap level");
    }
    return r.values[opts.gap_index] - r.values[0];
  };

  const int p = opts.coarse_points;
  std::vector<double> sg(p), gg(p);
  for (int i = 0; i < p; ++i) {
    sg[i] = static_cast<double>(i) / (p - 1);
    gg[i] = gap_at(sg[i]);
  }
  int imin = static_cast<int>(
      std::min_element(gg.begin(), gg.end()) - gg.begin());

  bool warning = false;
  for (int i = 1; i + 1 < p; ++i) {
    if (std::abs(i - imin) <= 1) continue;
    if (gg[i] <= gg[i - 1] && gg[i] <= gg[i + 1] &&
        gg[i] <= 1.1 * gg[imin]) {
      warning = true;
    }
  }

  // golden-section refinement inside the bracketing pair of grid cells
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = sg[std::max(0, imin - 1)];
  double hi = sg[std::min(p - 1, imin + 1)];
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = gap_at(x1), f2 = gap_at(x2);
  while (hi - lo > opts.tol_s) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = gap_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = gap_at(x2);
    }
  }
  double s_crit = 0.5 * (lo + hi);
  const double g_at_crit = gap_at(s_crit);

  // Fit window sized from a rough local curvature: far enough out that the
  // quadratic rise dominates solver noise, close enough that the quartic
  // correction stays below a percent. The fit itself carries the quartic
  // term so the reported curvature is unbiased at this window.
  const double h0 = 1.0 / (p - 1);
  const double c0 =
      (gap_at(std::max(0.0, s_crit - h0)) - 2.0 * g_at_crit +
       gap_at(std::min(1.0, s_crit + h0))) /
      (h0 * h0);
  double half = c0 > 0.0 ? std::sqrt(0.1 * g_at_crit / c0) : h0;
  half = std::max(half, 20.0 * opts.tol_s);
  half = std::min(half, 0.5);
  half *= opts.window_scale;

  std::vector<double> xs, e0s, e1s, gs;
  for (int i = 0; i < 11; ++i) {
    double s = std::clamp(s_crit + half * (i - 5) / 5.0, 0.0, 1.0);
    auto r = path.eval(s, count);
    xs.push_back(s - s_crit);
    e0s.push_back(r.values[0]);
    e1s.push_back(r.values[opts.gap_index]);
    gs.push_back(r.values[opts.gap_index] - r.values[0]);
  }

  // recentre on the fitted vertex, then refit about the true minimum
  auto gfit = poly_fit(xs, gs, 4);
  if (std::abs(gfit(2)) > 0.0) {
    const double shift = -gfit(1) / (2.0 * gfit(2));
    if (std::abs(shift) < half) {
      for (auto& x : xs) x -= shift;
      gfit = poly_fit(xs, gs, 4);
      s_crit += shift;
    }
  }
  const auto efit0 = poly_fit(xs, e0s, 4);
  const auto efit1 = poly_fit(xs, e1s, 4);

  CriticalFit fit;
  fit.s_crit = s_crit;
  fit.e0_fit = {efit0(0), efit0(1), 2.0 * efit0(2)};
  fit.e1_fit = {efit1(0), efit1(1), 2.0 * efit1(2)};
  fit.g_min = gfit(0);
  fit.c_min = gfit(2);
  fit.gap_slope_residual = std::abs(gfit(1));
  fit.fit_window = half;
  fit.multiple_minima_warning = warning;
  fit.subspace_label = path.label();
  return fit;
}

double runtime_estimate(const CriticalFit& fit) {
  if (fit.g_min <= 0.0 || fit.c_min <= 0.0) {
    throw Error("runtime estimate needs positive gap and curvature");
  }
  return std::sqrt(fit.c_min / (fit.g_min * fit.g_min * fit.g_min));
}

GapProfile gap_curve(const PauliOperatorSum& h_i, const PauliOperatorSum& h_f,
                     const std::vector<double>& grid,
                     std::shared_ptr<const SubspaceMap> map, int levels) {
  if (levels < 2) throw Error("gap curve needs at least two levels");
  PathOps path(h_i, h_f, map);
  GapProfile prof;
  prof.subspace_label = path.label();
  for (double s : grid) {
    if (!(s >= 0.0 && s <= 1.0)) throw Error("grid point outside [0, 1]");
    auto r = path.eval(s, levels);
    prof.s.push_back(s);
    prof.e0.push_back(r.values[0]);
    prof.e1.push_back(r.values[1]);
    if (levels >= 3 && r.values.size() >= 3) prof.e2.push_back(r.values[2]);
  }
  return prof;
}

}  // namespace aqs
