#pragma once

#include <string>
#include <vector>

namespace pmtm {

/// Power spectral density sampled on a grid of normalized frequencies in
/// [0, 1/2]. Two-sided convention: a process variance equals the integral of
/// `power` over [-1/2, 1/2].
struct PsdEstimate {
  std::vector<double> freqs;
  std::vector<double> power;
  std::string estimator;
  double bandwidth = 0.0;  // half time-bandwidth product, 0 when not applicable
  int taper_count = 0;

  [[nodiscard]] std::size_t size() const noexcept { return freqs.size(); }
};

/// Throws InputError unless sizes match, freqs are strictly increasing within
/// [0, 1/2] and power is non-negative.
void validate(const PsdEstimate& psd);

/// f_m = m / (2N) for m = 0..N-1.
std::vector<double> frequency_grid(int freq_bins);

}  // namespace pmtm
