#include "pmtm/mtm.hpp"

#include <cmath>
#include <numbers>

#include "pmtm/errors.hpp"

namespace pmtm {

namespace {

double tapered_power(const Eigen::Ref<const Eigen::VectorXd>& series,
                     const Eigen::Ref<const Eigen::VectorXd>& taper, double f) {
  const double w = 2.0 * std::numbers::pi * f;
  double re = 0.0;
  double im = 0.0;
  for (Eigen::Index k = 0; k < series.size(); ++k) {
    const double y = taper(k) * series(k);
    const double phase = w * static_cast<double>(k + 1);
    re += y * std::cos(phase);
    im -= y * std::sin(phase);
  }
  return re * re + im * im;
}

}  // namespace

void validate(const PsdEstimate& psd) {
  if (psd.freqs.size() != psd.power.size()) throw InputError("PSD frequency/power size mismatch");
  for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
    if (psd.freqs[i] < 0.0 || psd.freqs[i] > 0.5) throw InputError("PSD frequency outside [0, 1/2]");
    if (i > 0 && !(psd.freqs[i] > psd.freqs[i - 1])) {
      throw InputError("PSD frequencies must be strictly increasing");
    }
    if (!(psd.power[i] >= 0.0)) throw InputError("PSD power must be non-negative");
  }
}

std::vector<double> frequency_grid(int freq_bins) {
  if (freq_bins < 1) throw InputError("frequency grid needs at least one bin");
  std::vector<double> freqs(static_cast<std::size_t>(freq_bins));
  for (int m = 0; m < freq_bins; ++m) freqs[static_cast<std::size_t>(m)] = m / (2.0 * freq_bins);
  return freqs;
}

PsdEstimate eigen_spectrum(const Eigen::Ref<const Eigen::VectorXd>& series,
                           const Eigen::Ref<const Eigen::VectorXd>& taper,
                           const std::vector<double>& freqs) {
  if (series.size() != taper.size()) throw InputError("series and taper lengths differ");
  PsdEstimate psd;
  psd.freqs = freqs;
  psd.power.reserve(freqs.size());
  for (double f : freqs) psd.power.push_back(tapered_power(series, taper, f));
  psd.estimator = "eigen-spectrum";
  psd.taper_count = 1;
  return psd;
}

PsdEstimate mtm_psd(const Eigen::Ref<const Eigen::VectorXd>& series, const TaperSet& tapers,
                    const std::vector<double>& freqs) {
  if (tapers.length() != series.size()) throw InputError("taper length differs from series length");
  if (tapers.taper_count() < 1) throw InputError("taper set is empty");
  PsdEstimate psd;
  psd.freqs = freqs;
  psd.power.assign(freqs.size(), 0.0);
  for (int j = 0; j < tapers.taper_count(); ++j) {
    const Eigen::VectorXd taper = tapers.tapers.row(j).transpose();
    const PsdEstimate ej = eigen_spectrum(series, taper, freqs);
    for (std::size_t i = 0; i < freqs.size(); ++i) psd.power[i] += ej.power[i];
  }
  for (double& p : psd.power) p /= tapers.taper_count();
  psd.estimator = "mtm";
  psd.bandwidth = tapers.half_bandwidth_product;
  psd.taper_count = tapers.taper_count();
  return psd;
}

}  // namespace pmtm
