#include "pmtm/metrics.hpp"

#include <cmath>

#include "pmtm/errors.hpp"

namespace pmtm {

NormalizedMse normalized_mse(const PsdEstimate& estimate, const PsdEstimate& truth) {
  if (estimate.freqs.size() != truth.freqs.size() || estimate.power.size() != estimate.freqs.size() ||
      truth.power.size() != truth.freqs.size()) {
    throw InputError("normalized MSE: frequency grids differ in size");
  }
  NormalizedMse out;
  double total = 0.0;
  for (std::size_t i = 0; i < truth.freqs.size(); ++i) {
    if (std::abs(estimate.freqs[i] - truth.freqs[i]) > 1e-12) {
      throw InputError("normalized MSE: frequency grids differ");
    }
    if (truth.freqs[i] == 0.0) continue;
    const double s = truth.power[i];
    if (!(s > 0.0)) throw InputError("normalized MSE: true PSD must be positive");
    const double log_s = std::log(s);
    if (log_s == 0.0) throw InputError("normalized MSE: ln S vanishes at an included frequency");
    double est = estimate.power[i];
    if (!(est > 0.0)) {
      est = kPowerFloor;
      ++out.floored_terms;
    }
    const double rel = (std::log(est) - log_s) / log_s;
    out.per_frequency_terms.push_back(rel * rel);
    out.freqs.push_back(truth.freqs[i]);
    total += rel * rel;
  }
  if (out.per_frequency_terms.empty()) throw InputError("normalized MSE: no frequencies above zero");
  out.value = total / static_cast<double>(out.per_frequency_terms.size());
  return out;
}

}  // namespace pmtm
