#pragma once

#include <vector>

#include <Eigen/Core>

#include "pmtm/dpss.hpp"
#include "pmtm/psd.hpp"

namespace pmtm {

/// |sum_k exp(-i 2 pi f k) v_k x_k|^2 at each grid frequency (k = 1..K).
/// Throws InputError on length mismatch.
PsdEstimate eigen_spectrum(const Eigen::Ref<const Eigen::VectorXd>& series,
                           const Eigen::Ref<const Eigen::VectorXd>& taper,
                           const std::vector<double>& freqs);

/// Unweighted average of the eigen-spectra of every taper in the set.
PsdEstimate mtm_psd(const Eigen::Ref<const Eigen::VectorXd>& series, const TaperSet& tapers,
                    const std::vector<double>& freqs);

}  // namespace pmtm
