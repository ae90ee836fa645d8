// Command-line front end: instance generation, spectra, quenches, entropy
// profiles, factoring encodings, and batch experiments. Every subcommand
// writes CSV or JSON suitable for plotting.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aqs/common.hpp"
#include "aqs/ec3.hpp"
#include "aqs/entangle.hpp"
#include "aqs/evolve.hpp"
#include "aqs/factoring.hpp"
#include "aqs/harness.hpp"
#include "aqs/models.hpp"
#include "aqs/rng.hpp"
#include "aqs/spectra.hpp"
#include "aqs/state.hpp"

namespace {

using namespace aqs;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream(out) << text;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Shared problem selection: a closed-form model (--model with --n) or a
// generated instance file (--instance with --scheme).
struct Problem {
  PauliOperatorSum h_i, h_f;
  std::shared_ptr<const SubspaceMap> map;
  StateVector psi0;
};

struct ProblemArgs {
  std::string model;
  std::string instance;
  std::string scheme = "conventional";
  std::string sector;  // "even"/"odd" bit-flip parity, models only
  int n = 0;
  std::uint64_t marked = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model, "grover | ising | mixed");
    cmd->add_option("--instance", instance, "instance JSON file");
    cmd->add_option("--scheme", scheme, "conventional | xy | xyz");
    cmd->add_option("--sector", sector,
                    "even | odd bit-flip parity (models with a degenerate "
                    "ferromagnetic final state)");
    cmd->add_option("--n", n, "qubit count for --model");
    cmd->add_option("--marked", marked, "marked state for the search model");
  }

  Problem build() const {
    if (!model.empty()) {
      if (n < 1) throw Error("--model requires --n");
      auto [h_i, h_f] = model == "grover" ? grover_hamiltonians(n, marked)
                        : model == "ising" ? ising_hamiltonians(n)
                        : model == "mixed" ? mixed_hamiltonians(n)
                        : throw Error("unknown model: " + model);
      std::shared_ptr<const SubspaceMap> map;
      StateVector psi0 = prepare_conventional(n);
      if (!sector.empty()) {
        if (sector != "even" && sector != "odd")
          throw Error("unknown sector: " + sector);
        map = std::make_shared<SubspaceMap>(
            SubspaceMap::parity(n, sector == "even"));
        psi0 = gather(psi0, map);  // |S> is even under the global bit flip
        psi0.normalize();
      }
      return {std::move(h_i), std::move(h_f), std::move(map),
              std::move(psi0)};
    }
    if (!sector.empty()) throw Error("--sector applies to --model runs");
    if (instance.empty()) throw Error("need --model or --instance");
    const auto inst = instance_from_json(slurp(instance));
    if (scheme == "conventional")
      return {conventional_initial(inst), final_hamiltonian(inst), nullptr,
              prepare_conventional(inst.n())};
    if (scheme != "xy" && scheme != "xyz")
      throw Error("unknown scheme: " + scheme);
    const int w = solution_weight(inst);
    return {scheme == "xy" ? xy_initial(inst) : xyz_initial(inst),
            final_hamiltonian(inst),
            std::make_shared<SubspaceMap>(SubspaceMap::hamming(inst.n(), w)),
            prepare_sector_state(inst.n(), w)};
  }
};

nlohmann::json fit_json(const CriticalFit& fit) {
  nlohmann::json j;
  j["s_crit"] = fit.s_crit;
  j["g_min"] = fit.g_min;
  j["c_min"] = fit.c_min;
  j["e0_fit"] = fit.e0_fit;
  j["e1_fit"] = fit.e1_fit;
  j["gap_slope_residual"] = fit.gap_slope_residual;
  j["fit_window"] = fit.fit_window;
  j["multiple_minima_warning"] = fit.multiple_minima_warning;
  j["subspace"] = fit.subspace_label;
  return j;
}

int cmd_gen_ec3(int n, int count, std::optional<int> cap, std::uint64_t seed,
                const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const auto inst =
        generate_unique(n, Rng::substream(seed, i).raw(), cap);
    const auto path = std::filesystem::path(out_dir) /
                      ("ec3_n" + std::to_string(n) + "_" + std::to_string(i) +
                       ".json");
    std::ofstream(path) << instance_to_json(inst);
    std::cout << path.string() << '\n';
  }
  return 0;
}

int cmd_spectrum(const ProblemArgs& args, int grid, int levels,
                 const std::string& out) {
  const auto p = args.build();
  std::vector<double> s(grid);
  for (int i = 0; i < grid; ++i) s[i] = static_cast<double>(i) / (grid - 1);
  const auto prof = gap_curve(p.h_i, p.h_f, s, p.map, levels);
  std::string csv = levels >= 3 ? "s,E0,E1,E2\n" : "s,E0,E1\n";
  for (int i = 0; i < grid; ++i) {
    csv += fmt(prof.s[i]) + ',' + fmt(prof.e0[i]) + ',' + fmt(prof.e1[i]);
    if (levels >= 3) csv += ',' + fmt(prof.e2[i]);
    csv += '\n';
  }
  emit(csv, out);
  return 0;
}

int cmd_critfit(const ProblemArgs& args, bool with_estimate,
                const std::string& out) {
  const auto p = args.build();
  const auto fit = find_min_gap(p.h_i, p.h_f, p.map);
  auto j = fit_json(fit);
  if (with_estimate) j["estimator"] = runtime_estimate(fit);
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_evolve(const ProblemArgs& args, double t,
               std::optional<std::pair<double, double>> window, double tol,
               const std::string& out, const std::string& trajectory) {
  const auto p = args.build();
  nlohmann::json j;
  if (window) {
    const auto rs = runtime_for_fidelity(p.h_i, p.h_f, p.psi0,
                                         {window->first, window->second}, tol);
    j["T"] = rs.T;
    j["fidelity"] = rs.fidelity;
    j["converged"] = rs.converged;
    j["probes"] = rs.probes.size();
    t = rs.T;
  }
  QuenchSpec spec{.T = t, .tolerance = tol};
  if (!trajectory.empty()) spec.sample_stride = 1;
  const auto res = integrate(p.h_i, p.h_f, spec, p.psi0);
  j["final_fidelity"] = res.final_fidelity;
  j["norm_drift"] = res.norm_drift;
  j["steps_accepted"] = res.steps_accepted;
  j["steps_rejected"] = res.steps_rejected;
  if (!window) j["T"] = t;
  if (!trajectory.empty()) {
    std::string csv = "s,fidelity,energy\n";
    for (const auto& p2 : res.trajectory)
      csv += fmt(p2.s) + ',' + fmt(p2.fidelity) + ',' + fmt(p2.energy) + '\n';
    emit(csv, trajectory);
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_entropy(const ProblemArgs& args, int grid, const std::string& out) {
  const auto p = args.build();
  std::string csv = "s,mean_entropy,std\n";
  for (int i = 0; i < grid; ++i) {
    const double s = static_cast<double>(i) / (grid - 1);
    const auto h = interpolate(p.h_i, p.h_f, s);
    auto r = lowest_eigenpairs(h, 1, p.map);
    StateVector psi{std::move(r.vectors[0]), h.n_qubits(), p.map};
    if (p.map) psi = scatter(psi);
    const int n = h.n_qubits();
    double mean = 0.0, mean2 = 0.0;
    for (int n1 = 1; n1 < n; ++n1) {
      const double e = entropy(reduced_density(psi, n1));
      mean += e;
      mean2 += e * e;
    }
    mean /= n - 1;
    mean2 /= n - 1;
    const double var = std::max(0.0, mean2 - mean * mean);
    csv += fmt(s) + ',' + fmt(mean) + ',' + fmt(std::sqrt(var)) + '\n';
  }
  emit(csv, out);
  return 0;
}

int cmd_landscape(const std::string& model, int n, int s_grid, int phi_grid,
                  const std::string& out) {
  const auto m = landscape_model_from_name(model);
  std::string csv = "s,phi,E\n";
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < s_grid; ++i) {
    const double s = static_cast<double>(i) / (s_grid - 1);
    for (int j = 0; j < phi_grid; ++j) {
      const double phi = pi * j / (phi_grid - 1);
      csv += fmt(s) + ',' + fmt(phi) + ',' + fmt(landscape(m, n, s, phi)) +
             '\n';
    }
  }
  emit(csv, out);
  return 0;
}

int cmd_factor_encode(std::uint64_t omega, int n, int k, bool odd,
                      const std::string& out) {
  if (n == 0)
    for (auto w = omega; w; w >>= 1) ++n;  // minimal width of omega
  const auto layout = build_layout(omega, n, k, odd);
  auto j = nlohmann::json::parse(layout_to_json(layout));
  const auto q = to_quadratic(layout);
  j["quadratic"]["h"] = q.h;
  j["quadratic"]["h_i"] = q.h_i;
  j["quadratic"]["h_ij"] = q.h_ij;
  emit(j.dump(2) + "\n", out);
  return 0;
}

int cmd_factor_verify(std::uint64_t omega, int n, int k, bool odd) {
  if (n == 0)
    for (auto w = omega; w; w >>= 1) ++n;
  const auto layout = build_layout(omega, n, k, odd);
  const auto g = brute_force_ground(layout);
  nlohmann::json j;
  j["qubits"] = layout.n_qubits();
  j["ground_energy"] = g.energy.to_double();
  j["degeneracy"] = g.assignments.size();
  j["factors"] = nlohmann::json::array();
  for (const auto& [a, b] : g.factors) j["factors"].push_back({a, b});
  std::cout << j.dump(2) << '\n';
  return g.energy == Rational(0) ? 0 : 1;
}

int cmd_experiment_run(const std::string& config_path) {
  const auto config = config_from_json(slurp(config_path));
  const auto res = run_experiment(config);
  int failures = 0;
  for (const auto& r : res.records) failures += !r.ok;
  nlohmann::json j;
  j["id"] = config.id;
  j["records"] = res.records.size();
  j["failures"] = failures;
  j["corpus_hash"] = res.corpus_hash;
  j["output_dir"] = config.output_dir;
  std::cout << j.dump(2) << '\n';
  if (config.output_dir.empty()) std::cout << records_csv(res.records);
  return 0;
}

int cmd_experiment_report(const std::string& dir) {
  std::cout << slurp((std::filesystem::path(dir) / "manifest.json").string());
  std::cout << slurp((std::filesystem::path(dir) / "aggregates.csv").string());

  // scaling fit over the stored records, when quench times are present
  std::ifstream in(std::filesystem::path(dir) / "records.csv");
  std::string line;
  std::getline(in, line);  // header
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    size_t pos = 0;
    while (pos <= line.size()) {
      const size_t c = line.find(',', pos);
      f.push_back(line.substr(pos, c == std::string::npos ? c : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (f.size() < 14) continue;
    RunRecord r;
    r.estimator = std::atof(f[9].c_str());
    r.t_measured = std::atof(f[10].c_str());
    r.ok = f[12] == "1";
    records.push_back(r);
  }
  try {
    const auto fit = correlate_scaling(records);
    std::cout << "scaling: slope " << fmt(fit.slope) << " +- "
              << fmt(fit.slope_half_width) << ", intercept "
              << fmt(fit.intercept) << ", points " << fit.count << '\n';
  } catch (const Error&) {
    // too few measured quench times for a fit; the tables above stand alone
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-Hamiltonian quench benchmark toolkit"};
  app.require_subcommand(1);

  // gen-ec3
  int gen_n = 10, gen_count = 1;
  std::optional<int> gen_cap;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "instances";
  auto* gen = app.add_subcommand("gen-ec3", "generate unique-solution instances");
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--count", gen_count);
  gen->add_option("--cap", gen_cap, "clause cap for hard corpora");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out-dir", gen_out);

  // spectrum / critfit / estimate / evolve / entropy share problem selection
  ProblemArgs spec_args, crit_args, est_args, evo_args, ent_args;
  int spec_grid = 101, spec_levels = 3;
  std::string spec_out;
  auto* spectrum = app.add_subcommand("spectrum", "low levels of H(s) as CSV");
  spec_args.attach(spectrum);
  spectrum->add_option("--grid", spec_grid);
  spectrum->add_option("--levels", spec_levels)->check(CLI::Range(2, 3));
  spectrum->add_option("--out", spec_out);

  std::string crit_out;
  auto* critfit = app.add_subcommand("critfit", "minimum-gap fit as JSON");
  crit_args.attach(critfit);
  critfit->add_option("--out", crit_out);

  std::string est_out;
  auto* estimate =
      app.add_subcommand("estimate", "minimum-gap fit plus the runtime scale");
  est_args.attach(estimate);
  estimate->add_option("--out", est_out);

  double evo_t = 0.0, evo_tol = 1e-9;
  std::pair<double, double> evo_window;
  std::string evo_out, evo_traj;
  auto* evolve = app.add_subcommand("evolve", "linear quench integration");
  evo_args.attach(evolve);
  auto* t_opt = evolve->add_option("--T", evo_t, "quench time");
  auto* w_opt = evolve->add_option("--target-window", evo_window,
                                   "fidelity window for the time search");
  t_opt->excludes(w_opt);
  evolve->add_option("--tol", evo_tol);
  evolve->add_option("--out", evo_out);
  evolve->add_option("--trajectory", evo_traj, "per-step CSV output");

  int ent_grid = 51;
  std::string ent_out;
  auto* entropy_cmd =
      app.add_subcommand("entropy", "chain-averaged ground-state entropy");
  ent_args.attach(entropy_cmd);
  entropy_cmd->add_option("--grid", ent_grid);
  entropy_cmd->add_option("--out", ent_out);

  std::string land_model = "grover", land_out;
  int land_n = 8, land_s = 51, land_phi = 101;
  auto* land = app.add_subcommand(
      "landscape", "product-state energy surface E(s, phi) as CSV");
  land->add_option("--model", land_model);
  land->add_option("--n", land_n);
  land->add_option("--s-grid", land_s);
  land->add_option("--phi-grid", land_phi);
  land->add_option("--out", land_out);

  std::uint64_t fac_omega = 0;
  int fac_n = 0, fac_k = 0;
  bool fac_odd = true;
  std::string fac_out;
  auto* fenc = app.add_subcommand("factor-encode",
                                  "multiplication-table encoding as JSON");
  fenc->add_option("--omega", fac_omega)->required();
  fenc->add_option("--n", fac_n, "bit width (default: width of omega)");
  fenc->add_option("--k", fac_k)->required();
  fenc->add_flag("--odd,!--no-odd", fac_odd, "apply the odd reduction");
  fenc->add_option("--out", fac_out);

  std::uint64_t ver_omega = 0;
  int ver_n = 0, ver_k = 0;
  bool ver_odd = true;
  auto* fver = app.add_subcommand("factor-verify",
                                  "brute-force ground-state check");
  fver->add_option("--omega", ver_omega)->required();
  fver->add_option("--n", ver_n);
  fver->add_option("--k", ver_k)->required();
  fver->add_flag("--odd,!--no-odd", ver_odd);

  auto* exp = app.add_subcommand("experiment", "batch runs from a JSON config");
  exp->require_subcommand(1);
  std::string exp_config, exp_dir;
  auto* exp_run = exp->add_subcommand("run");
  exp_run->add_option("config", exp_config)->required();
  auto* exp_report = exp->add_subcommand("report");
  exp_report->add_option("dir", exp_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_ec3(gen_n, gen_count, gen_cap, gen_seed, gen_out);
    if (spectrum->parsed())
      return cmd_spectrum(spec_args, spec_grid, spec_levels, spec_out);
    if (critfit->parsed()) return cmd_critfit(crit_args, false, crit_out);
    if (estimate->parsed()) return cmd_critfit(est_args, true, est_out);
    if (evolve->parsed())
      return cmd_evolve(evo_args, evo_t,
                        w_opt->count() ? std::optional{evo_window}
                                       : std::nullopt,
                        evo_tol, evo_out, evo_traj);
    if (entropy_cmd->parsed()) return cmd_entropy(ent_args, ent_grid, ent_out);
    if (land->parsed())
      return cmd_landscape(land_model, land_n, land_s, land_phi, land_out);
    if (fenc->parsed())
      return cmd_factor_encode(fac_omega, fac_n, fac_k, fac_odd, fac_out);
    if (fver->parsed()) return cmd_factor_verify(ver_omega, ver_n, ver_k, ver_odd);
    if (exp_run->parsed()) return cmd_experiment_run(exp_config);
    if (exp_report->parsed()) return cmd_experiment_report(exp_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
