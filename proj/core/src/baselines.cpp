#include "pmtm/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "pmtm/errors.hpp"
#include "pmtm/mtm.hpp"

namespace pmtm {

namespace {

struct FilterPass {
  Eigen::VectorXd filtered_mean;  // index 0 is the initial state
  Eigen::VectorXd filtered_var;
  Eigen::VectorXd predicted_var;  // index k holds Var(x_k | data up to k - 1)
  int clamped = 0;
};

// Maximizes -(x - prior)^2 / (2 v) + c log(mu + x) + (L - c) log(1 - mu - x)
// over mu + x in [margin, 1 - margin]; returns the maximizer and whether it
// sits on the margin.
std::pair<double, bool> update_mode(double prior, double v, double c, double trials, double mu,
                                    double margin) {
  auto slope = [&](double x) {
    const double rate = mu + x;
    return -(x - prior) / v + c / rate - (trials - c) / (1.0 - rate);
  };
  double lo = margin - mu;
  double hi = 1.0 - margin - mu;
  if (slope(lo) <= 0.0) return {lo, true};
  if (slope(hi) >= 0.0) return {hi, true};
  double x = std::clamp(prior, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double g = slope(x);
    if (g > 0.0) lo = x; else hi = x;
    const double rate = mu + x;
    const double curv = 1.0 / v + c / (rate * rate) + (trials - c) / ((1.0 - rate) * (1.0 - rate));
    double next = x + g / curv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(x))) return {next, false};
    x = next;
  }
  return {x, false};
}

FilterPass forward_filter(const Eigen::VectorXd& counts, double trials, double mu, double q,
                          const SsOptions& opt) {
  const Eigen::Index k_max = counts.size();
  FilterPass f;
  f.filtered_mean.resize(k_max + 1);
  f.filtered_var.resize(k_max + 1);
  f.predicted_var.resize(k_max + 1);
  f.filtered_mean(0) = 0.0;
  f.filtered_var(0) = opt.initial_state_var;
  f.predicted_var(0) = opt.initial_state_var;
  for (Eigen::Index k = 1; k <= k_max; ++k) {
    const double prior = f.filtered_mean(k - 1);
    const double vp = f.filtered_var(k - 1) + q;
    const double c = counts(k - 1);
    const auto [x, pinned] = update_mode(prior, vp, c, trials, mu, opt.rate_margin);
    if (pinned) ++f.clamped;
    const double rate = mu + x;
    const double info = 1.0 / vp + c / (rate * rate) + (trials - c) / ((1.0 - rate) * (1.0 - rate));
    f.predicted_var(k) = vp;
    f.filtered_mean(k) = x;
    f.filtered_var(k) = 1.0 / info;
  }
  return f;
}

}  // namespace

PsdEstimate psth_psd(const SpikeEnsemble& spikes, const TaperSet& tapers,
                     const std::vector<double>& freqs) {
  Eigen::VectorXd psth = spikes.trials().colwise().mean().transpose();
  psth.array() -= psth.mean();
  PsdEstimate psd = mtm_psd(psth, tapers, freqs);
  psd.estimator = "psth";
  return psd;
}

SsModel fit_random_walk(const SpikeEnsemble& spikes, const SsOptions& opt) {
  if (opt.em_iters < 1 || !(opt.initial_noise_var > 0.0) || !(opt.initial_state_var > 0.0) ||
      !(opt.rate_margin > 0.0 && opt.rate_margin < 0.5) || !(opt.em_tol > 0.0)) {
    throw InputError("invalid state-space smoother options");
  }
  const Eigen::VectorXd counts = spikes.trials().colwise().sum().transpose();
  const double trials = spikes.trial_count();
  const Eigen::Index k_max = counts.size();

  SsModel model;
  model.mean_rate = std::clamp(spikes.trials().mean(), 2.0 * opt.rate_margin, 1.0 - 2.0 * opt.rate_margin);
  double q = opt.initial_noise_var;

  Eigen::VectorXd xs(k_max + 1);
  Eigen::VectorXd vs(k_max + 1);
  Eigen::VectorXd gain(k_max + 1);
  // Fixed-interval (Rauch-Tung-Striebel) backward pass.
  auto smooth = [&](const FilterPass& f) {
    xs(k_max) = f.filtered_mean(k_max);
    vs(k_max) = f.filtered_var(k_max);
    for (Eigen::Index k = k_max - 1; k >= 0; --k) {
      gain(k) = f.filtered_var(k) / f.predicted_var(k + 1);
      xs(k) = f.filtered_mean(k) + gain(k) * (xs(k + 1) - f.filtered_mean(k));
      vs(k) = f.filtered_var(k) + gain(k) * gain(k) * (vs(k + 1) - f.predicted_var(k + 1));
    }
  };
  for (int iter = 0; iter < opt.em_iters; ++iter) {
    const FilterPass f = forward_filter(counts, trials, model.mean_rate, q, opt);
    model.clamped_updates = f.clamped;

    smooth(f);

    // E[(x_k - x_{k-1})^2] with Cov(x_k, x_{k-1} | data) = gain_{k-1} vs_k.
    double sum = 0.0;
    for (Eigen::Index k = 1; k <= k_max; ++k) {
      const double d = xs(k) - xs(k - 1);
      sum += d * d + vs(k) + vs(k - 1) - 2.0 * gain(k - 1) * vs(k);
    }
    const double q_next = std::max(sum / static_cast<double>(k_max), 1e-16);
    model.em_iterations = iter + 1;
    const double change = std::abs(q_next - q) / q;
    q = q_next;
    if (change < opt.em_tol) break;
  }

  // Final smoothing pass at the estimated q.
  const FilterPass f = forward_filter(counts, trials, model.mean_rate, q, opt);
  model.clamped_updates = f.clamped;
  smooth(f);
  model.process_noise_var = q;
  model.smoothed_states = xs.tail(k_max);
  model.smoothed_variances = vs.tail(k_max);
  return model;
}

PsdEstimate ss_psd(const SpikeEnsemble& spikes, const TaperSet& tapers,
                   const std::vector<double>& freqs, const SsOptions& options) {
  const SsModel model = fit_random_walk(spikes, options);
  Eigen::VectorXd states = model.smoothed_states;
  states.array() -= states.mean();
  PsdEstimate psd = mtm_psd(states, tapers, freqs);
  psd.estimator = "ss";
  return psd;
}

}  // namespace pmtm
