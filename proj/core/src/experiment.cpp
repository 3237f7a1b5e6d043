#include "pmtm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pmtm/dpss.hpp"
#include "pmtm/errors.hpp"
#include "pmtm/metrics.hpp"
#include "pmtm/mtm.hpp"
#include "pmtm/pmtm.hpp"
#include "pmtm/simulate.hpp"

namespace pmtm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool wants(const ExperimentConfig& cfg, const std::string& name) {
  return std::find(cfg.estimators.begin(), cfg.estimators.end(), name) != cfg.estimators.end();
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_ar < 1 || cfg.n_ensembles < 1) throw InputError("realization counts must be at least 1");
  if (cfg.trials < 1) throw InputError("trial count must be at least 1");
  if (cfg.bins < 4) throw InputError("bin count must be at least 4");
  if (!(cfg.mean_rate >= 0.0 && cfg.mean_rate <= 1.0)) throw InputError("mean rate must lie in [0, 1]");
  if (cfg.estimators.empty()) throw InputError("no estimators selected");
  for (const auto& e : cfg.estimators) {
    if (e != "pmtm" && e != "ss" && e != "psth" && e != "oracle") {
      throw InputError("unknown estimator '" + e + "'");
    }
  }
  validate(cfg.em);
}

std::map<std::string, EstimatorSummary> summarize(const std::vector<RunRecord>& runs) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : runs) {
    if (!r.ok) continue;
    for (const auto& [name, v] : r.nmse) values[name].push_back(v);
  }
  std::map<std::string, EstimatorSummary> out;
  for (const auto& [name, vs] : values) {
    EstimatorSummary s;
    s.runs = static_cast<int>(vs.size());
    double sum = 0.0;
    for (double v : vs) sum += v;
    s.mean = sum / s.runs;
    if (s.runs > 1) {
      double ss = 0.0;
      for (double v : vs) ss += (v - s.mean) * (v - s.mean);
      s.std_dev = std::sqrt(ss / (s.runs - 1));
    }
    out[name] = s;
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::function<void(const RunRecord&)>& on_run) {
  validate(cfg);
  const ArModel model(cfg.ar_coeffs, cfg.noise_std);

  PmtmOptions popt;
  popt.alpha = cfg.alpha;
  popt.tapers = cfg.tapers;
  popt.freq_bins = cfg.freq_bins;
  popt.em = cfg.em;
  const int n = resolve_freq_bins(popt, cfg.bins);
  const std::vector<double> freqs = frequency_grid(n);
  const PsdEstimate truth = ar_true_psd(model, freqs);
  const TaperSet tapers = generate_dpss(cfg.bins, cfg.alpha, cfg.tapers);

  ExperimentReport report;
  report.config = cfg;
  for (int r = 0; r < cfg.n_ar; ++r) {
    const std::uint64_t ar_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    const LatentSeries latent = simulate_ar(model, cfg.bins, ar_seed);
    const Cif cif = linear_link_cif(latent, cfg.mean_rate);
    std::optional<PsdEstimate> oracle;
    if (wants(cfg, "oracle")) {
      oracle = mtm_psd(latent.values, tapers, freqs);
      oracle->estimator = "oracle";
    }

    for (int e = 0; e < cfg.n_ensembles; ++e) {
      RunRecord run;
      run.ar_index = r;
      run.ensemble_index = e;
      run.ar_seed = ar_seed;
      run.spike_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(e));
      run.clamped_bins = cif.clamped;
      try {
        const SpikeEnsemble spikes = generate_spikes(cif.rates, cfg.trials, run.spike_seed);
        run.mean_rate_estimate = estimate_mean_rate(spikes);
        std::vector<PsdEstimate> curves;
        if (cfg.keep_psds) curves.push_back(truth);
        auto score = [&](PsdEstimate psd) {
          run.nmse[psd.estimator] = normalized_mse(psd, truth).value;
          if (cfg.keep_psds) curves.push_back(std::move(psd));
        };
        if (wants(cfg, "pmtm")) score(run_pmtm(spikes, popt).psd);
        if (wants(cfg, "ss")) score(ss_psd(spikes, tapers, freqs, cfg.ss));
        if (wants(cfg, "psth")) score(psth_psd(spikes, tapers, freqs));
        if (oracle) score(*oracle);
        run.psds = std::move(curves);
      } catch (const std::exception& ex) {
        run.ok = false;
        run.error = ex.what();
        run.nmse.clear();
        ++report.failed_runs;
      }
      if (on_run) on_run(run);
      report.runs.push_back(std::move(run));
    }
  }
  report.summary = summarize(report.runs);
  return report;
}

}  // namespace pmtm
