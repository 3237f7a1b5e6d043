#include "pmtm/pmtm.hpp"

#include <string>

#include "pmtm/errors.hpp"

namespace pmtm {

int resolve_freq_bins(const PmtmOptions& options, int bin_count) {
  const int n = options.freq_bins == 0 ? bin_count / 2 : options.freq_bins;
  if (n < 2) throw InputError("PMTM needs at least two frequency bins");
  return n;
}

std::vector<AuxStatistic> build_aux_statistics(const SpikeEnsemble& spikes, const TaperSet& tapers,
                                               double mean_rate) {
  std::vector<AuxStatistic> out;
  out.reserve(static_cast<std::size_t>(tapers.taper_count()));
  for (int j = 0; j < tapers.taper_count(); ++j) {
    out.push_back(build_aux_statistic(spikes, tapers.tapers.row(j).transpose(), mean_rate, j));
  }
  return out;
}

PsdEstimate pmtm_eigen_spectrum(const AuxStatistic& aux, const DesignMatrix& design,
                                const EmConfig& cfg, EmTrace* trace) {
  EigenSpectrumFit fit = estimate_eigen_spectrum(aux, design, cfg);
  PsdEstimate psd = psd_from_params(fit.params);
  const double factor =
      aux.taper_scale * aux.taper_scale * spectral_scale(design.bin_count(), design.freq_bins());
  for (double& p : psd.power) p *= factor;
  psd.estimator = "pmtm-eigen";
  psd.taper_count = 1;
  if (trace != nullptr) *trace = std::move(fit.trace);
  return psd;
}

PmtmResult run_pmtm(const SpikeEnsemble& spikes, const PmtmOptions& options) {
  validate(options.em);
  const int k = spikes.bin_count();
  const int n = resolve_freq_bins(options, k);

  PmtmResult result;
  result.alpha = options.alpha;
  result.tapers = options.tapers;
  result.freq_bins = n;
  result.em = options.em;
  result.mean_rate = estimate_mean_rate(spikes);
  result.spectral_scale = spectral_scale(k, n);

  const TaperSet tapers = generate_dpss(k, options.alpha, options.tapers);
  const DesignMatrix design(k, n);
  const std::vector<AuxStatistic> aux = build_aux_statistics(spikes, tapers, result.mean_rate);

  result.per_taper_psds.resize(aux.size());
  result.traces.resize(aux.size());
  for (std::size_t j = 0; j < aux.size(); ++j) {
    try {
      result.per_taper_psds[j] = pmtm_eigen_spectrum(aux[j], design, options.em, &result.traces[j]);
    } catch (const NumericalError& e) {
      throw NumericalError("taper " + std::to_string(j) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("taper " + std::to_string(j) + ": " + e.what());
    }
    result.taper_scales.push_back(aux[j].taper_scale);
  }

  result.psd.freqs = frequency_grid(n);
  result.psd.power.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& eig : result.per_taper_psds) {
    for (std::size_t i = 0; i < eig.power.size(); ++i) result.psd.power[i] += eig.power[i];
  }
  for (double& p : result.psd.power) p /= static_cast<double>(result.per_taper_psds.size());
  result.psd.estimator = "pmtm";
  result.psd.bandwidth = options.alpha;
  result.psd.taper_count = options.tapers;
  return result;
}

}  // namespace pmtm
