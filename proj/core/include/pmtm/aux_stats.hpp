#pragma once

#include <Eigen/Core>

#include "pmtm/simulate.hpp"

namespace pmtm {

/// Tapered sufficient statistics for one taper. Each row is a trial; the
/// ensemble mean of column k converges to offsets(k) + x_k * v_k / taper_scale.
struct AuxStatistic {
  Eigen::MatrixXd values;   // L x K, entries in [0, 1]
  Eigen::VectorXd offsets;  // K, tapered baseline rate
  int taper_index = 0;
  double taper_scale = 1.0;  // max |v_k| of the raw taper

  [[nodiscard]] int trial_count() const noexcept { return static_cast<int>(values.rows()); }
  [[nodiscard]] int bin_count() const noexcept { return static_cast<int>(values.cols()); }
};

/// Builds the statistic from a raw taper v. With u = v / max|v|:
///   values(l, k)  = n_lk * u_k           if u_k >= 0
///                 = -(1 - n_lk) * u_k    otherwise
///   offsets(k)    = mean_rate * u_k      if u_k >= 0
///                 = -(1 - mean_rate) * u_k otherwise
/// Throws InputError on length mismatch, an all-zero taper, or mean_rate
/// outside [0, 1].
AuxStatistic build_aux_statistic(const SpikeEnsemble& spikes,
                                 const Eigen::Ref<const Eigen::VectorXd>& taper,
                                 double mean_rate, int taper_index = 0);

/// Grand mean of all spike entries.
double estimate_mean_rate(const SpikeEnsemble& spikes);

}  // namespace pmtm
