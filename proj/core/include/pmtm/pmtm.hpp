#pragma once

#include <vector>

#include "pmtm/aux_stats.hpp"
#include "pmtm/dpss.hpp"
#include "pmtm/em_estimator.hpp"
#include "pmtm/psd.hpp"
#include "pmtm/simulate.hpp"
#include "pmtm/spectral_model.hpp"

namespace pmtm {

struct PmtmOptions {
  double alpha = 5.0;  // half time-bandwidth product K W
  int tapers = 8;
  int freq_bins = 0;   // 0 selects K / 2
  EmConfig em;
};

struct PmtmResult {
  PsdEstimate psd;
  std::vector<PsdEstimate> per_taper_psds;  // already rescaled
  std::vector<EmTrace> traces;
  std::vector<double> taper_scales;         // max |v| per taper
  double mean_rate = 0.0;
  double spectral_scale = 1.0;              // see pmtm::spectral_scale
  double alpha = 0.0;
  int tapers = 0;
  int freq_bins = 0;
  EmConfig em;
};

/// Resolves freq_bins == 0 to K / 2 and checks the remaining options.
int resolve_freq_bins(const PmtmOptions& options, int bin_count);

/// Auxiliary statistics for every taper, sharing one mean-rate estimate.
std::vector<AuxStatistic> build_aux_statistics(const SpikeEnsemble& spikes, const TaperSet& tapers,
                                               double mean_rate);

/// One rescaled eigen-spectrum: EM fit of the taper's auxiliary statistic,
/// readout of the coefficient variances, multiplied by taper_scale^2 and by
/// spectral_scale(K, N).
PsdEstimate pmtm_eigen_spectrum(const AuxStatistic& aux, const DesignMatrix& design,
                                const EmConfig& cfg, EmTrace* trace = nullptr);

/// Point-process multitaper estimate: dpss tapers, auxiliary statistics,
/// one EM eigen-spectrum per taper, and their unweighted average. Any taper
/// failure aborts the run; the rethrown error names the taper index.
PmtmResult run_pmtm(const SpikeEnsemble& spikes, const PmtmOptions& options);

}  // namespace pmtm
