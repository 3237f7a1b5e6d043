#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "json_io.hpp"
#include "pmtm/baselines.hpp"
#include "pmtm/csv.hpp"
#include "pmtm/dpss.hpp"
#include "pmtm/errors.hpp"
#include "pmtm/experiment.hpp"
#include "pmtm/metrics.hpp"
#include "pmtm/mtm.hpp"
#include "pmtm/pmtm.hpp"
#include "pmtm/simulate.hpp"

namespace pmtm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

fs::path sidecar_for(const fs::path& out, const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  fs::path p = out;
  p += ".json";
  return p;
}

struct EmFlags {
  std::string config_path;
  std::optional<int> max_em_iters;
  std::optional<double> em_tol;
  std::optional<int> max_newton_iters;
  std::optional<double> newton_grad_tol;
  std::optional<double> armijo_c;
  std::optional<double> backtrack_ratio;
  std::optional<double> boundary_margin;
  std::optional<double> barrier_weight;
  std::optional<double> initial_theta;

  void add(CLI::App* app) {
    app->add_option("--em-config", config_path, "JSON file with EM settings");
    app->add_option("--max-em-iters", max_em_iters);
    app->add_option("--em-tol", em_tol);
    app->add_option("--max-newton-iters", max_newton_iters);
    app->add_option("--newton-grad-tol", newton_grad_tol);
    app->add_option("--armijo-c", armijo_c);
    app->add_option("--backtrack-ratio", backtrack_ratio);
    app->add_option("--boundary-margin", boundary_margin);
    app->add_option("--barrier-weight", barrier_weight);
    app->add_option("--initial-theta", initial_theta);
  }

  void apply(EmConfig& cfg) const {
    if (!config_path.empty()) from_json(read_json_file(config_path), cfg);
    if (max_em_iters) cfg.max_em_iters = *max_em_iters;
    if (em_tol) cfg.em_tol = *em_tol;
    if (max_newton_iters) cfg.max_newton_iters = *max_newton_iters;
    if (newton_grad_tol) cfg.newton_grad_tol = *newton_grad_tol;
    if (armijo_c) cfg.armijo_c = *armijo_c;
    if (backtrack_ratio) cfg.backtrack_ratio = *backtrack_ratio;
    if (boundary_margin) cfg.boundary_margin = *boundary_margin;
    if (barrier_weight) cfg.barrier_weight = *barrier_weight;
    if (initial_theta) cfg.initial_theta = *initial_theta;
    validate(cfg);
  }
};

struct SimulateArgs {
  std::vector<double> coeffs{0.4152, -0.0922, 0.4170, -0.8852};
  double noise_std = 0.025;
  double mean_rate = 0.12;
  int bins = 512;
  int trials = 10;
  std::uint64_t seed = 1;
  std::optional<int> burn_in;
  std::string out;
  std::string meta;
  std::string latent_out;
};

void cmd_simulate(const SimulateArgs& a) {
  const ArModel model(a.coeffs, a.noise_std);
  const LatentSeries latent = simulate_ar(model, a.bins, a.seed, a.burn_in);
  const Cif cif = linear_link_cif(latent, a.mean_rate);
  const std::uint64_t spike_seed = derive_seed(a.seed, 1);
  const SpikeEnsemble spikes = generate_spikes(cif.rates, a.trials, spike_seed);
  if (cif.clamped > 0) {
    std::cerr << "warning: " << cif.clamped << " CIF bins clamped into [0, 1]\n";
  }

  auto out = open_out(a.out);
  write_spike_csv(out, spikes);
  if (!a.latent_out.empty()) {
    auto lat = open_out(a.latent_out);
    write_matrix_csv(lat, latent.values.transpose());
  }
  write_json(sidecar_for(a.out, a.meta),
             {{"ar_coeffs", a.coeffs},
              {"noise_std", a.noise_std},
              {"mean_rate", a.mean_rate},
              {"bins", a.bins},
              {"trials", a.trials},
              {"seed", a.seed},
              {"spike_seed", spike_seed},
              {"rng", "mt19937_64"},
              {"burn_in", latent.burn_in},
              {"clamped_bins", cif.clamped}});
}

struct DpssArgs {
  int bins = 512;
  double alpha = 5.0;
  int tapers = 8;
  std::string out;
  std::string meta;
};

void cmd_dpss(const DpssArgs& a) {
  const TaperSet set = generate_dpss(a.bins, a.alpha, a.tapers);
  auto out = open_out(a.out);
  write_matrix_csv(out, set.tapers);
  write_json(sidecar_for(a.out, a.meta),
             {{"bins", a.bins},
              {"alpha", a.alpha},
              {"tapers", a.tapers},
              {"concentrations", std::vector<double>(set.concentrations.begin(), set.concentrations.end())},
              {"scale_factors", std::vector<double>(set.scale_factors.begin(), set.scale_factors.end())}});
}

struct SpectrumArgs {
  std::string spikes;
  double alpha = 5.0;
  int tapers = 8;
  int freq_bins = 0;
  std::string out;
  std::string meta;
};

struct PmtmArgs : SpectrumArgs {
  EmFlags em;
  std::string dump_traces;
  std::string dump_aux;
};

void cmd_pmtm(const PmtmArgs& a) {
  const SpikeEnsemble spikes = read_spike_csv(fs::path(a.spikes));
  PmtmOptions opt;
  opt.alpha = a.alpha;
  opt.tapers = a.tapers;
  opt.freq_bins = a.freq_bins;
  a.em.apply(opt.em);

  if (!a.dump_aux.empty()) {
    const TaperSet tapers = generate_dpss(spikes.bin_count(), opt.alpha, opt.tapers);
    const auto aux = build_aux_statistics(spikes, tapers, estimate_mean_rate(spikes));
    fs::create_directories(a.dump_aux);
    for (const auto& s : aux) {
      const std::string stem = "aux_" + std::to_string(s.taper_index);
      auto v = open_out(fs::path(a.dump_aux) / (stem + ".csv"));
      write_matrix_csv(v, s.values);
      auto o = open_out(fs::path(a.dump_aux) / (stem + "_offsets.csv"));
      write_matrix_csv(o, s.offsets.transpose());
    }
  }

  const PmtmResult result = run_pmtm(spikes, opt);
  auto out = open_out(a.out);
  write_psd_csv(out, result.psd);
  json meta = pmtm_metadata(result);
  meta["input"] = a.spikes;
  meta["trials"] = spikes.trial_count();
  meta["bins"] = spikes.bin_count();
  write_json(sidecar_for(a.out, a.meta), meta);
  if (!a.dump_traces.empty()) write_json(a.dump_traces, json(result.traces));
}

struct BaselineArgs : SpectrumArgs {
  std::string method = "psth";
  std::string ss_config;
};

void cmd_baseline(const BaselineArgs& a) {
  const SpikeEnsemble spikes = read_spike_csv(fs::path(a.spikes));
  PmtmOptions grid_opt;
  grid_opt.freq_bins = a.freq_bins;
  const int n = resolve_freq_bins(grid_opt, spikes.bin_count());
  const std::vector<double> freqs = frequency_grid(n);
  const TaperSet tapers = generate_dpss(spikes.bin_count(), a.alpha, a.tapers);

  json meta = {{"estimator", a.method}, {"alpha", a.alpha}, {"tapers", a.tapers},
               {"freq_bins", n},        {"input", a.spikes}};
  PsdEstimate psd;
  if (a.method == "psth") {
    psd = psth_psd(spikes, tapers, freqs);
  } else {
    SsOptions ss;
    if (!a.ss_config.empty()) from_json(read_json_file(a.ss_config), ss);
    const SsModel model = fit_random_walk(spikes, ss);
    Eigen::VectorXd states = model.smoothed_states;
    states.array() -= states.mean();
    psd = mtm_psd(states, tapers, freqs);
    psd.estimator = "ss";
    meta["ss"] = ss;
    meta["process_noise_var"] = model.process_noise_var;
    meta["em_iterations"] = model.em_iterations;
    meta["clamped_updates"] = model.clamped_updates;
    if (model.clamped_updates > 0) {
      std::cerr << "warning: " << model.clamped_updates << " smoother updates clamped to the rate margin\n";
    }
  }
  auto out = open_out(a.out);
  write_psd_csv(out, psd);
  write_json(sidecar_for(a.out, a.meta), meta);
}

struct EvaluateArgs {
  std::string estimate;
  std::string truth;
  std::vector<double> coeffs;
  double noise_std = 0.025;
  bool benchmark_truth = false;
  std::string out;
};

void cmd_evaluate(const EvaluateArgs& a) {
  std::ifstream in(a.estimate);
  if (!in) throw InputError("cannot open " + a.estimate);
  const PsdEstimate estimate = read_psd_csv(in);
  PsdEstimate truth;
  if (!a.truth.empty()) {
    std::ifstream tin(a.truth);
    if (!tin) throw InputError("cannot open " + a.truth);
    truth = read_psd_csv(tin);
  } else {
    const ArModel model = a.coeffs.empty() ? ArModel::benchmark() : ArModel(a.coeffs, a.noise_std);
    truth = ar_true_psd(model, estimate.freqs);
  }
  const NormalizedMse m = normalized_mse(estimate, truth);
  const json j = {{"metric", kNormalizedMseFormula},
                  {"normalized_mse", m.value},
                  {"frequencies", m.freqs.size()},
                  {"floored_terms", m.floored_terms}};
  if (m.floored_terms > 0) std::cerr << "warning: " << m.floored_terms << " non-positive estimate values floored\n";
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(a.out, j);
  }
}

struct ExperimentArgs {
  std::string config;
  EmFlags em;
  std::optional<int> n_ar;
  std::optional<int> n_ensembles;
  std::optional<int> trials;
  std::optional<double> mean_rate;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> estimators;
  std::string out_runs;
  std::string out_summary;
  std::string plot_data;
  bool quiet = false;
};

void cmd_experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  if (!a.config.empty()) from_json(read_json_file(a.config), cfg);
  a.em.apply(cfg.em);
  if (a.n_ar) cfg.n_ar = *a.n_ar;
  if (a.n_ensembles) cfg.n_ensembles = *a.n_ensembles;
  if (a.trials) cfg.trials = *a.trials;
  if (a.mean_rate) cfg.mean_rate = *a.mean_rate;
  if (a.seed) cfg.seed = *a.seed;
  if (!a.estimators.empty()) cfg.estimators = a.estimators;
  cfg.keep_psds = !a.plot_data.empty();

  const ExperimentReport report = run_experiment(cfg, [&](const RunRecord& r) {
    if (a.quiet) return;
    std::cerr << "run ar=" << r.ar_index << " ens=" << r.ensemble_index;
    if (!r.ok) std::cerr << " FAILED: " << r.error;
    for (const auto& [name, v] : r.nmse) std::cerr << ' ' << name << '=' << v;
    std::cerr << '\n';
  });

  const json summary = summary_json(report);
  if (!a.out_summary.empty()) {
    write_json(a.out_summary, summary);
  } else {
    std::cout << summary.dump(2) << '\n';
  }

  if (!a.out_runs.empty()) {
    auto out = open_out(a.out_runs);
    out.precision(17);
    out << "# metric: " << kNormalizedMseFormula << '\n';
    out << "ar_index,ensemble_index,ar_seed,spike_seed,ok,estimator,nmse\n";
    for (const auto& r : report.runs) {
      if (!r.ok) {
        out << r.ar_index << ',' << r.ensemble_index << ',' << r.ar_seed << ',' << r.spike_seed
            << ",0,,\n";
        continue;
      }
      for (const auto& [name, v] : r.nmse) {
        out << r.ar_index << ',' << r.ensemble_index << ',' << r.ar_seed << ',' << r.spike_seed
            << ",1," << name << ',' << v << '\n';
      }
    }
  }

  if (!a.plot_data.empty()) {
    auto out = open_out(a.plot_data);
    out.precision(17);
    out << "frequency,estimator,power,run_id\n";
    for (const auto& r : report.runs) {
      const std::string id = std::to_string(r.ar_index) + "-" + std::to_string(r.ensemble_index);
      for (const auto& psd : r.psds) {
        for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
          out << psd.freqs[i] << ',' << psd.estimator << ',' << psd.power[i] << ',' << id << '\n';
        }
      }
    }
  }
  if (report.failed_runs > 0) {
    std::cerr << "warning: " << report.failed_runs << " runs failed\n";
  }
}

void add_spectrum_options(CLI::App* cmd, SpectrumArgs& a) {
  cmd->add_option("--spikes", a.spikes, "Spike CSV (L rows x K columns of 0/1)")->required();
  cmd->add_option("--alpha", a.alpha, "Half time-bandwidth product K*W")->capture_default_str();
  cmd->add_option("--tapers", a.tapers, "Number of dpss tapers J")->capture_default_str();
  cmd->add_option("--freq-bins", a.freq_bins, "Frequency bins N (0 = K/2)")->capture_default_str();
  cmd->add_option("--out", a.out, "Output PSD CSV")->required();
  cmd->add_option("--meta", a.meta, "Metadata JSON (default: <out>.json)");
}

}  // namespace

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Point-process multitaper spectral estimation for binary spike trains"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate AR-driven Bernoulli spike trains");
  simulate->add_option("--coeffs", sim.coeffs, "AR coefficients a_1..a_p")->capture_default_str();
  simulate->add_option("--noise-std", sim.noise_std)->capture_default_str();
  simulate->add_option("--mu", sim.mean_rate, "Baseline rate of the linear link")->capture_default_str();
  simulate->add_option("--bins", sim.bins, "K")->capture_default_str();
  simulate->add_option("--trials", sim.trials, "L")->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--burn-in", sim.burn_in);
  simulate->add_option("--out", sim.out, "Spike CSV output")->required();
  simulate->add_option("--meta", sim.meta, "Sidecar JSON (default: <out>.json)");
  simulate->add_option("--latent-out", sim.latent_out, "Also write the latent series as a CSV row");

  DpssArgs dp;
  auto* dpss = app.add_subcommand("dpss", "Write Slepian tapers");
  dpss->add_option("--bins", dp.bins)->capture_default_str();
  dpss->add_option("--alpha", dp.alpha)->capture_default_str();
  dpss->add_option("--tapers", dp.tapers)->capture_default_str();
  dpss->add_option("--out", dp.out, "Taper CSV (J rows x K columns)")->required();
  dpss->add_option("--meta", dp.meta, "Sidecar JSON (default: <out>.json)");

  PmtmArgs pm;
  auto* pmtm_cmd = app.add_subcommand("pmtm", "Point-process multitaper PSD of a spike ensemble");
  add_spectrum_options(pmtm_cmd, pm);
  pm.em.add(pmtm_cmd);
  pmtm_cmd->add_option("--dump-traces", pm.dump_traces, "Write per-taper EM traces as JSON");
  pmtm_cmd->add_option("--dump-aux", pm.dump_aux, "Directory for auxiliary statistic CSVs");

  BaselineArgs bl;
  auto* baseline = app.add_subcommand("baseline", "PSTH or state-space baseline PSD");
  add_spectrum_options(baseline, bl);
  baseline->add_option("--method", bl.method)->check(CLI::IsMember({"psth", "ss"}))->capture_default_str();
  baseline->add_option("--ss-config", bl.ss_config, "JSON file with smoother settings");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Normalized MSE of one PSD estimate");
  evaluate->add_option("--estimate", ev.estimate, "PSD CSV")->required();
  auto* truth_opt = evaluate->add_option("--truth", ev.truth, "True PSD CSV on the same grid");
  evaluate->add_option("--coeffs", ev.coeffs, "AR coefficients for an analytic truth")->excludes(truth_opt);
  evaluate->add_option("--noise-std", ev.noise_std)->capture_default_str();
  evaluate->add_option("--out", ev.out, "Write the result JSON here instead of stdout");

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "Full simulation benchmark");
  experiment->add_option("--config", ex.config, "Experiment JSON config");
  ex.em.add(experiment);
  experiment->add_option("--n-ar", ex.n_ar);
  experiment->add_option("--n-ensembles", ex.n_ensembles);
  experiment->add_option("--trials", ex.trials);
  experiment->add_option("--mu", ex.mean_rate);
  experiment->add_option("--seed", ex.seed);
  experiment->add_option("--estimators", ex.estimators)
      ->check(CLI::IsMember({"pmtm", "ss", "psth", "oracle"}));
  experiment->add_option("--out-runs", ex.out_runs, "Per-run CSV");
  experiment->add_option("--out-summary", ex.out_summary, "Aggregate JSON (default: stdout)");
  experiment->add_option("--plot-data", ex.plot_data, "Tidy CSV of every PSD curve");
  experiment->add_flag("--quiet", ex.quiet, "No per-run progress on stderr");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) cmd_simulate(sim);
    if (*dpss) cmd_dpss(dp);
    if (*pmtm_cmd) cmd_pmtm(pm);
    if (*baseline) cmd_baseline(bl);
    if (*evaluate) cmd_evaluate(ev);
    if (*experiment) cmd_experiment(ex);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace pmtm::cli
