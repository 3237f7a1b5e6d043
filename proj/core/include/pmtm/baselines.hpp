#pragma once

#include <vector>

#include <Eigen/Core>

#include "pmtm/dpss.hpp"
#include "pmtm/psd.hpp"
#include "pmtm/simulate.hpp"

namespace pmtm {

/// Multitaper PSD of the mean-centered trial-averaged spike train.
PsdEstimate psth_psd(const SpikeEnsemble& spikes, const TaperSet& tapers,
                     const std::vector<double>& freqs);

struct SsOptions {
  int em_iters = 50;
  double em_tol = 1e-4;          // relative change of the process-noise variance
  double initial_noise_var = 1e-3;
  double initial_state_var = 1e-2;
  double rate_margin = 1e-6;     // filtered rates are kept in [margin, 1 - margin]
};

/// Random-walk state-space fit lambda_k = mu + x_k, x_k = x_{k-1} + w_k,
/// w_k ~ N(0, q), with Bernoulli observations of every trial.
struct SsModel {
  double process_noise_var = 0.0;       // q
  double mean_rate = 0.0;               // mu, the ensemble grand mean
  Eigen::VectorXd smoothed_states;      // E[x_k | all data], k = 1..K
  Eigen::VectorXd smoothed_variances;
  int em_iterations = 0;
  int clamped_updates = 0;              // filter updates pinned to the rate margin
};

/// Point-process filter (Gaussian approximation around the one-step posterior
/// mode) followed by fixed-interval smoothing, with q estimated by EM.
SsModel fit_random_walk(const SpikeEnsemble& spikes, const SsOptions& options = {});

/// Multitaper PSD of the mean-centered smoothed state of fit_random_walk.
PsdEstimate ss_psd(const SpikeEnsemble& spikes, const TaperSet& tapers,
                   const std::vector<double>& freqs, const SsOptions& options = {});

}  // namespace pmtm
