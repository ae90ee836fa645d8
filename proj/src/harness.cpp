#include "aqs/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include "aqs/common.hpp"
#include "aqs/evolve.hpp"
#include "aqs/models.hpp"
#include "aqs/rng.hpp"
#include "aqs/spectra.hpp"
#include "aqs/state.hpp"
#include "aqs/factoring.hpp"

namespace aqs {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

void validate(const ExperimentConfig& c) {
  if (c.instances < 1) throw Error("instance count must be >= 1");
  if (c.schemes.empty()) throw Error("scheme set must be non-empty");
  if (c.sizes.empty()) throw Error("size list must be non-empty");
  if (c.family != "ec3" && c.family != "grover")
    throw Error("unknown family: " + c.family);
  for (const auto& s : c.schemes) {
    const bool known = s == "conventional" || s == "xy" || s == "xyz";
    if (!known) throw Error("unknown scheme: " + s);
    if (c.family == "grover" && s != "conventional")
      throw Error("grover family supports only the conventional scheme");
  }
  if (!(c.window[0] > 0.0 && c.window[0] < c.window[1]))
    throw Error("fidelity window must satisfy 0 < lo < hi");
}

struct PreparedRun {
  PauliOperatorSum h_i, h_f;
  std::shared_ptr<const SubspaceMap> map;  // null for the full basis
  StateVector psi0;
  int w;
};

PreparedRun prepare_ec3(const Ec3Instance& inst, const std::string& scheme) {
  const int n = inst.n();
  if (scheme == "conventional")
    return {conventional_initial(inst), final_hamiltonian(inst), nullptr,
            prepare_conventional(n), -1};
  const int w = solution_weight(inst);
  return {scheme == "xy" ? xy_initial(inst) : xyz_initial(inst),
          final_hamiltonian(inst),
          std::make_shared<SubspaceMap>(SubspaceMap::hamming(n, w)),
          prepare_sector_state(n, w), w};
}

PreparedRun prepare_grover(int n, std::uint64_t marked) {
  auto [h_i, h_f] = grover_hamiltonians(n, marked);
  return {std::move(h_i), std::move(h_f), nullptr, prepare_conventional(n), -1};
}

// One corpus entry: every scheme runs on the same generated problem.
struct Job {
  int n = 0;
  int instance = 0;
  std::uint64_t seed = 0;
};

struct JobOutput {
  std::vector<RunRecord> records;
  std::string content;  // identity string entering the corpus hash
};

JobOutput run_job(const ExperimentConfig& config, const Job& job) {
  JobOutput out;
  std::optional<Ec3Instance> inst;
  std::uint64_t marked = 0;
  try {
    if (config.family == "ec3") {
      inst = generate_unique(job.n, job.seed, config.clause_cap);
      out.content = instance_to_json(*inst);
    } else {
      marked = Rng::substream(job.seed, 0).below(std::uint64_t{1} << job.n);
      out.content = "grover n=" + std::to_string(job.n) +
                    " w=" + std::to_string(marked);
    }
  } catch (const std::exception& e) {
    // a failed draw still has to land in the records, not in std::terminate
    out.content = "generation failed n=" + std::to_string(job.n) +
                  " seed=" + std::to_string(job.seed);
    for (const auto& scheme : config.schemes) {
      RunRecord rec{.family = config.family, .scheme = scheme, .n = job.n,
                    .instance = job.instance, .seed = job.seed};
      rec.ok = false;
      rec.note = sanitize(e.what());
      out.records.push_back(std::move(rec));
    }
    return out;
  }

  for (const auto& scheme : config.schemes) {
    RunRecord rec{.family = config.family, .scheme = scheme, .n = job.n,
                  .instance = job.instance, .seed = job.seed};
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0).count();
    };
    try {
      const PreparedRun run = config.family == "ec3"
                                  ? prepare_ec3(*inst, scheme)
                                  : prepare_grover(job.n, marked);
      rec.w = run.w;

      const CriticalFit fit = find_min_gap(run.h_i, run.h_f, run.map);
      rec.s_crit = fit.s_crit;
      rec.g_min = fit.g_min;
      rec.c_min = fit.c_min;
      rec.estimator = runtime_estimate(fit);

      if (config.measure_runtime) {
        if (elapsed() > config.run_budget_s) {
          rec.ok = false;
          rec.note = "wall budget exhausted before the quench search";
        } else {
          const auto rs =
              runtime_for_fidelity(run.h_i, run.h_f, run.psi0, config.window,
                                   config.tolerance, config.probe_budget);
          if (rs.converged) {
            rec.t_measured = rs.T;
            rec.fidelity = rs.fidelity;
          } else {
            rec.ok = false;
            rec.note = "fidelity window not reached within the probe budget";
          }
        }
      }
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.note = sanitize(e.what());
    }
    rec.wall_s = elapsed();
    out.records.push_back(std::move(rec));
  }
  return out;
}

void append_aggregates(std::vector<AggregateRow>& rows, int n,
                       const std::string& scheme,
                       const std::vector<RunRecord>& records) {
  const std::pair<std::string, double RunRecord::*> quantities[] = {
      {"g_min", &RunRecord::g_min},
      {"c_min", &RunRecord::c_min},
      {"estimator", &RunRecord::estimator},
      {"t_measured", &RunRecord::t_measured}};
  for (const auto& [name, field] : quantities) {
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.n != n || r.scheme != scheme || !r.ok) continue;
      if (name == "t_measured" && r.t_measured <= 0.0) continue;
      values.push_back(r.*field);
    }
    if (values.empty()) continue;
    const auto ci = median_ci99(values);
    rows.push_back({n, scheme, name, static_cast<int>(values.size()),
                    median(values), ci[0], ci[1]});
  }
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("AQS_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of an empty sample");
  std::sort(values.begin(), values.end());
  const size_t m = values.size();
  return m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

std::array<double, 2> median_ci99(std::vector<double> values) {
  if (values.empty()) throw Error("confidence interval of an empty sample");
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  // largest d with P(Binomial(n, 1/2) <= d-1) <= 0.005, floored at 1
  int d = 1;
  double pmf = std::pow(2.0, -n);
  if (pmf > 0.0) {
    double cdf = pmf;  // P(B <= 0)
    for (int k = 1; k <= n / 2; ++k) {
      if (cdf > 0.005) break;
      d = k;
      pmf *= static_cast<double>(n - k + 1) / k;
      cdf += pmf;
    }
  } else {  // normal approximation for samples too large for the recurrence
    d = static_cast<int>(
        std::floor(0.5 * (n + 1.0 - 2.5758 * std::sqrt(static_cast<double>(n)))));
    d = std::max(d, 1);
  }
  return {values[d - 1], values[n - d]};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  result.config = config;

  std::vector<Job> jobs;
  for (int n : config.sizes)
    for (int i = 0; i < config.instances; ++i) {
      const std::uint64_t key =
          (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(i);
      jobs.push_back({n, i, Rng::substream(config.seed, key).raw()});
    }

  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1))
      outputs[j] = run_job(config, jobs[j]);
  };
  const int threads = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::string corpus;
  for (auto& out : outputs) {
    corpus += out.content;
    corpus += '\n';
    for (auto& rec : out.records) result.records.push_back(std::move(rec));
  }
  result.corpus_hash = hex64(fnv1a(corpus));

  for (int n : config.sizes)
    for (const auto& scheme : config.schemes)
      append_aggregates(result.aggregates, n, scheme, result.records);

  if (!config.output_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    std::ofstream(dir / "records.csv") << records_csv(result.records);
    std::ofstream(dir / "aggregates.csv") << aggregates_csv(result.aggregates);
    nlohmann::json manifest;
    manifest["config"] = nlohmann::json::parse(config_to_json(config));
    manifest["corpus_hash"] = result.corpus_hash;
    manifest["records"] = result.records.size();
    manifest["failures"] =
        std::count_if(result.records.begin(), result.records.end(),
                      [](const RunRecord& r) { return !r.ok; });
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
  }
  return result;
}

std::string records_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "family,scheme,n,instance,seed,w,s_crit,g_min,c_min,estimator,"
      "t_measured,fidelity,ok,note\n";
  for (const auto& r : records) {
    out += r.family + ',' + r.scheme + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.instance) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.w) + ',' + fmt(r.s_crit) + ',' + fmt(r.g_min) +
           ',' + fmt(r.c_min) + ',' + fmt(r.estimator) + ',' +
           fmt(r.t_measured) + ',' + fmt(r.fidelity) + ',' +
           (r.ok ? "1" : "0") + ',' + sanitize(r.note) + '\n';
  }
  return out;
}

std::string aggregates_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "n,scheme,quantity,count,median,ci_lo,ci_hi\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + r.scheme + ',' + r.quantity + ',' +
           std::to_string(r.count) + ',' + fmt(r.median) + ',' + fmt(r.ci_lo) +
           ',' + fmt(r.ci_hi) + '\n';
  }
  return out;
}

ExperimentConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.id = j.value("id", c.id);
  c.family = j.value("family", c.family);
  c.sizes = j.value("sizes", c.sizes);
  c.instances = j.value("instances", c.instances);
  c.schemes = j.value("schemes", c.schemes);
  c.seed = j.value("seed", c.seed);
  if (j.contains("clause_cap") && !j["clause_cap"].is_null())
    c.clause_cap = j["clause_cap"].get<int>();
  c.measure_runtime = j.value("measure_runtime", c.measure_runtime);
  if (j.contains("window")) {
    c.window[0] = j["window"].at(0).get<double>();
    c.window[1] = j["window"].at(1).get<double>();
  }
  c.tolerance = j.value("tolerance", c.tolerance);
  c.probe_budget = j.value("probe_budget", c.probe_budget);
  c.run_budget_s = j.value("run_budget_s", c.run_budget_s);
  c.output_dir = j.value("output_dir", c.output_dir);
  validate(c);
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["id"] = c.id;
  j["family"] = c.family;
  j["sizes"] = c.sizes;
  j["instances"] = c.instances;
  j["schemes"] = c.schemes;
  j["seed"] = c.seed;
  if (c.clause_cap) j["clause_cap"] = *c.clause_cap;
  j["measure_runtime"] = c.measure_runtime;
  j["window"] = {c.window[0], c.window[1]};
  j["tolerance"] = c.tolerance;
  j["probe_budget"] = c.probe_budget;
  j["run_budget_s"] = c.run_budget_s;
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

SectorSweep sweep_sector(const Ec3Instance& inst, double t, double tolerance,
                         bool shortlist) {
  const auto sols = brute_force_solve(inst);
  if (sols.size() != 1) throw Error("sector sweep requires a unique solution");
  const std::uint64_t sol = sols[0];
  const int n = inst.n();
  const int sol_w = std::popcount(sol);

  int lo = 0, hi = n;
  if (shortlist) {
    const int c = static_cast<int>(std::lround(n / 3.0));
    lo = std::max(0, c - 2);
    hi = std::min(n, c + 2);
  }

  const auto h_i = xy_initial(inst);
  const auto h_f = final_hamiltonian(inst);
  SectorSweep sweep;
  for (int w = lo; w <= hi; ++w) {
    double f = 0.0;
    // a sector that excludes the solution stays orthogonal to it forever
    if (w == sol_w) {
      const auto res =
          integrate(h_i, h_f, {.T = t, .tolerance = tolerance},
                    prepare_sector_state(n, w));
      const auto pos = res.final_state.map->position(sol);
      f = std::norm(res.final_state.amp[*pos]);
    }
    sweep.fidelities.emplace_back(w, f);
    if (f > sweep.best_fidelity) {
      sweep.best_fidelity = f;
      sweep.best_w = w;
    }
  }
  return sweep;
}

ScalingFit correlate_scaling(const std::vector<RunRecord>& records) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (!r.ok || r.t_measured <= 0.0 || r.estimator <= 0.0) continue;
    x.push_back(std::log(r.estimator));
    y.push_back(std::log(r.t_measured));
  }
  const int m = static_cast<int>(x.size());
  if (m < 10) throw Error("scaling fit needs at least 10 usable records");
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (*xmax - *xmin < 1e-9) throw Error("degenerate estimator spread");

  double sx = 0, sy = 0;
  for (int i = 0; i < m; ++i) sx += x[i], sy += y[i];
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  ScalingFit fit;
  fit.count = m;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (int i = 0; i < m; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss_res += r * r;
  }
  fit.slope_half_width = 2.5758 * std::sqrt(ss_res / (m - 2) / sxx);
  return fit;
}

std::vector<FactoringGapRow> factoring_gap_study(int qubit_budget) {
  struct TableRow {
    std::uint64_t omega;
    int n, k;
  };
  // every accessible bi-prime/partition at 21 qubits or fewer
  const TableRow table[] = {{33, 6, 4},  {51, 7, 5}, {35, 6, 3}, {25, 6, 3},
                            {105, 7, 4}, {85, 8, 5}, {121, 8, 4}};
  std::vector<FactoringGapRow> rows;
  for (const auto& tr : table) {
    const auto layout = build_layout(tr.omega, tr.n, tr.k, true);
    if (layout.n_qubits() > qubit_budget) continue;
    const auto ground = brute_force_ground(layout);
    const auto q = to_quadratic(layout);
    const auto h_f = reconstruct(q);
    const auto inits = initial_hamiltonians(q);

    FactoringGapRow row{.omega = tr.omega, .n = tr.n, .k = tr.k,
                        .qubits = layout.n_qubits(),
                        .degeneracy =
                            static_cast<int>(ground.assignments.size())};

    MinGapOptions full_opts;
    full_opts.gap_index = row.degeneracy;  // gap above the final ground cluster
    row.x_gap = find_min_gap(inits.x, h_f, nullptr, full_opts).g_min;

    row.w = std::popcount(ground.assignments[0]);
    int in_sector = 0;
    for (const auto a : ground.assignments)
      if (std::popcount(a) == row.w) ++in_sector;
    const auto map = std::make_shared<SubspaceMap>(
        SubspaceMap::hamming(layout.n_qubits(), row.w));
    if (map->dim() <= static_cast<std::size_t>(in_sector)) {
      // no level above the ground cluster: the restricted quench is trivial
      row.xy_gap = row.xyz_gap = std::numeric_limits<double>::infinity();
    } else {
      MinGapOptions sector_opts;
      sector_opts.gap_index = in_sector;
      row.xy_gap = find_min_gap(inits.xy, h_f, map, sector_opts).g_min;
      row.xyz_gap = find_min_gap(inits.xyz, h_f, map, sector_opts).g_min;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aqs
