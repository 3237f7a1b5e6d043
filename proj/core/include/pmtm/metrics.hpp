#pragma once

#include <string>
#include <vector>

#include "pmtm/psd.hpp"

namespace pmtm {

struct NormalizedMse {
  double value = 0.0;
  std::vector<double> per_frequency_terms;
  std::vector<double> freqs;  // frequencies entering the average
  int floored_terms = 0;      // estimate power <= 0 replaced by kPowerFloor
};

inline constexpr double kPowerFloor = 1e-30;

/// Human-readable form of the metric, written into report headers.
inline constexpr const char* kNormalizedMseFormula =
    "mean over f > 0 of ((ln S_hat(f) - ln S(f)) / ln S(f))^2";

/// Log-domain squared error of `estimate` relative to `truth`, averaged over
/// the shared grid with f = 0 excluded. Throws InputError when the grids
/// differ, when no frequency remains, or when the truth is non-positive or
/// has ln S = 0 at some included frequency.
NormalizedMse normalized_mse(const PsdEstimate& estimate, const PsdEstimate& truth);

}  // namespace pmtm
