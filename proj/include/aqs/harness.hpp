#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aqs/ec3.hpp"

namespace aqs {

// Batch driver for the benchmark experiments: seeded corpus generation,
// spectral fits and quench-time searches per instance, and medians with
// distribution-free confidence intervals per size.

struct ExperimentConfig {
  std::string id = "experiment";
  std::string family = "ec3";  // "ec3" or "grover"
  std::vector<int> sizes;
  int instances = 100;
  std::vector<std::string> schemes;  // ec3: conventional/xy/xyz; grover: conventional
  std::uint64_t seed = 1;
  std::optional<int> clause_cap;     // ec3 hard corpora, e.g. round(2n/3)
  bool measure_runtime = true;       // false: spectral quantities only
  std::array<double, 2> window{0.12, 0.13};
  double tolerance = 1e-6;           // integrator tolerance for quench probes
  int probe_budget = 40;
  double run_budget_s = 900.0;       // wall budget per record; overruns skip
                                     // the quench search and note it
  std::string output_dir;            // empty: nothing written
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct RunRecord {
  std::string family;
  std::string scheme;
  int n = 0;
  int instance = 0;
  std::uint64_t seed = 0;
  int w = -1;  // Hamming sector, -1 for full-basis schemes
  double s_crit = 0.0;
  double g_min = 0.0;
  double c_min = 0.0;
  double estimator = 0.0;    // sqrt(c_min / g_min^3)
  double t_measured = 0.0;   // 0 when the quench search was skipped or failed
  double fidelity = 0.0;
  double wall_s = 0.0;       // excluded from CSV to keep reruns byte-identical
  bool ok = true;
  std::string note;
};

struct AggregateRow {
  int n = 0;
  std::string scheme;
  std::string quantity;  // g_min / c_min / estimator / t_measured
  int count = 0;         // successes entering the statistic
  double median = 0.0;
  double ci_lo = 0.0;  // 99% distribution-free CI of the median
  double ci_hi = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunRecord> records;     // deterministic (n, instance, scheme) order
  std::vector<AggregateRow> aggregates;
  std::string corpus_hash;            // content hash of the generated instances
};

double median(std::vector<double> values);

// Order-statistic interval [x_(d), x_(n+1-d)] with binomial(n, 1/2) coverage
// >= 99%; collapses to the sample range when n is too small for that level.
std::array<double, 2> median_ci99(std::vector<double> values);

// Runs every (size, instance, scheme) job, spectra first and then the quench
// search when enabled. Failures become records with ok = false and a reason;
// aggregates are computed over the successes. When output_dir is set, writes
// records.csv, aggregates.csv, and manifest.json (config, hashes, failures).
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string records_csv(const std::vector<RunRecord>& records);
std::string aggregates_csv(const std::vector<AggregateRow>& rows);

struct SectorSweep {
  int best_w = -1;
  double best_fidelity = 0.0;
  std::vector<std::pair<int, double>> fidelities;  // (W, |<solution|psi(T)>|^2)
};

// Quenches the exchange scheme in each candidate Hamming sector and reports
// which sector reaches the solution. Shortlist mode tries only weights within
// two of round(n/3); otherwise all of 0..n.
SectorSweep sweep_sector(const Ec3Instance& inst, double t,
                         double tolerance = 1e-6, bool shortlist = false);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_half_width = 0.0;  // 99% band on the slope
  int count = 0;
};

// log-log regression of measured quench time against the gap estimator over
// the successful records. Throws on fewer than 10 usable points or a
// degenerate estimator spread.
ScalingFit correlate_scaling(const std::vector<RunRecord>& records);

struct FactoringGapRow {
  std::uint64_t omega = 0;
  int n = 0, k = 0;
  int qubits = 0;
  int degeneracy = 1;   // ground multiplicity (2 for the k = n-k mirror pair)
  int w = -1;           // sector used for the exchange schemes
  double x_gap = 0.0;   // minimum interpolation gap per initial Hamiltonian
  double xy_gap = 0.0;
  double xyz_gap = 0.0;
};

// Minimum interpolation gap for every tabulated bi-prime/partition whose
// qubit count fits the budget, one row per (omega, n, k). Exchange schemes
// run in the Hamming sector of a ground assignment; degenerate grounds are
// skipped over via the gap index.
std::vector<FactoringGapRow> factoring_gap_study(int qubit_budget = 17);

// Thread count for instance-level parallelism: AQS_THREADS when set, else
// the hardware concurrency. Results merge in job order regardless.
int worker_count();

}  // namespace aqs
