#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pmtm/baselines.hpp"
#include "pmtm/em_estimator.hpp"
#include "pmtm/psd.hpp"

namespace pmtm {

/// Simulation benchmark: AR latent process, linear-link Bernoulli spikes,
/// and every estimator scored against the analytic AR spectrum.
struct ExperimentConfig {
  std::vector<double> ar_coeffs{0.4152, -0.0922, 0.4170, -0.8852};
  double noise_std = 0.025;
  double mean_rate = 0.12;
  int bins = 512;
  int trials = 10;
  double alpha = 5.0;
  int tapers = 8;
  int freq_bins = 0;  // 0 selects bins / 2
  EmConfig em;
  SsOptions ss;
  int n_ar = 10;
  int n_ensembles = 5;
  std::uint64_t seed = 20190401;
  bool keep_psds = false;  // retain every PSD curve in the run records
  std::vector<std::string> estimators{"pmtm", "ss", "psth", "oracle"};
};

/// Throws InputError for invalid counts, dimensions or estimator names.
void validate(const ExperimentConfig& cfg);

struct RunRecord {
  int ar_index = 0;
  int ensemble_index = 0;
  std::uint64_t ar_seed = 0;
  std::uint64_t spike_seed = 0;
  int clamped_bins = 0;  // CIF bins clamped into [0, 1]
  double mean_rate_estimate = 0.0;
  std::map<std::string, double> nmse;  // estimator -> normalized MSE
  std::vector<PsdEstimate> psds;       // filled when keep_psds, truth first
  bool ok = true;
  std::string error;
};

struct EstimatorSummary {
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation over successful runs
  int runs = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  std::map<std::string, EstimatorSummary> summary;
  int failed_runs = 0;
};

/// Seeds derived from (base, ar_index) and (base, ar_index, ensemble_index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = ~0ULL);

/// Runs n_ar x n_ensembles realizations. Sub-module errors mark the run as
/// failed and are excluded from the summary.
ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::function<void(const RunRecord&)>& on_run = {});

/// Mean and sample standard deviation of the successful runs' values.
std::map<std::string, EstimatorSummary> summarize(const std::vector<RunRecord>& runs);

}  // namespace pmtm
