#pragma once

#include <Eigen/Core>

namespace pmtm {

/// Discrete prolate spheroidal sequences for one (K, alpha) design.
struct TaperSet {
  Eigen::MatrixXd tapers;          // J x K, row j is the j-th Slepian sequence
  Eigen::VectorXd concentrations;  // fraction of energy inside [-W, W]
  double half_bandwidth_product = 0.0;  // alpha = K * W
  Eigen::VectorXd scale_factors;   // max |v_k| per taper

  [[nodiscard]] int taper_count() const noexcept { return static_cast<int>(tapers.rows()); }
  [[nodiscard]] int length() const noexcept { return static_cast<int>(tapers.cols()); }
};

/// The first `taper_count` Slepian tapers of length `length` with half
/// time-bandwidth product alpha, computed from the commuting symmetric
/// tridiagonal matrix by Sturm bisection and inverse iteration.
///
/// Tapers are unit-energy and ordered by decreasing concentration. Even-order
/// tapers have positive sum; odd-order tapers have positive first moment
/// sum_k k * v_k.
///
/// Requires length >= 2, 1 <= alpha < length / 2, 1 <= taper_count < floor(2 alpha);
/// throws InputError otherwise.
TaperSet generate_dpss(int length, double alpha, int taper_count);

/// Symmetric tridiagonal matrix whose eigenvectors are the Slepian sequences.
struct SlepianTridiagonal {
  Eigen::VectorXd diagonal;     // ((K - 1 - 2k) / 2)^2 cos(2 pi W)
  Eigen::VectorXd off_diagonal; // k (K - k) / 2, k = 1..K-1
};
SlepianTridiagonal slepian_tridiagonal(int length, double bandwidth);

/// v' M v with M(k, k') = sin(2 pi W (k - k')) / (pi (k - k')) and M(k, k) = 2W.
double sinc_concentration(const Eigen::Ref<const Eigen::VectorXd>& taper, double bandwidth);

}  // namespace pmtm
