#pragma once

#include <vector>

#include <Eigen/Core>

#include "pmtm/psd.hpp"

namespace pmtm {

/// Piecewise-constant discretization of the spectral representation of a
/// length-K real process on N frequency bins: x = A z with
///   z = (a_1, a_2, b_2, ..., a_N, b_N)              (2N - 1 entries)
///   A(k, 0)      =  2/N
///   A(k, 2m - 1) =  2/N cos(k m pi / N)
///   A(k, 2m)     = -2/N sin(k m pi / N)             k = 1..K, m = 1..N-1
class DesignMatrix {
 public:
  /// Throws InputError unless bin_count >= 1 and freq_bins >= 2.
  DesignMatrix(int bin_count, int freq_bins);

  [[nodiscard]] int bin_count() const noexcept { return bin_count_; }
  [[nodiscard]] int freq_bins() const noexcept { return freq_bins_; }
  [[nodiscard]] int parameter_count() const noexcept { return 2 * freq_bins_ - 1; }
  [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }

  [[nodiscard]] Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  [[nodiscard]] Eigen::VectorXd apply_transpose(const Eigen::Ref<const Eigen::VectorXd>& r) const;

  /// A' diag(w) A, assembled from O(K N) trigonometric sums instead of the
  /// O(K N^2) dense product.
  [[nodiscard]] Eigen::MatrixXd weighted_gram(const Eigen::Ref<const Eigen::VectorXd>& w) const;

 private:
  int bin_count_;
  int freq_bins_;
  Eigen::MatrixXd entries_;
  std::vector<double> cos_table_;  // cos(pi r / N), r = 0..2N-1
  std::vector<double> sin_table_;
};

/// Prior variances theta = (sigma_1^2, ..., sigma_{2N-1}^2) of the latent
/// coefficients. truncation_bound is the prior support half-width mu; it is
/// carried for reference and does not enter the EM computations.
struct SpectralParams {
  Eigen::VectorXd variances;
  double truncation_bound = 0.5;
};

/// Throws InputError unless the vector is non-empty with odd length and all
/// variances are positive and finite.
void validate(const SpectralParams& params);

/// Gaussian (Laplace) approximation of the latent-coefficient posterior.
struct LatentPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;          // may be empty when only marginals were requested
  Eigen::VectorXd marginal_variances;  // diagonal of the covariance
};

/// S(0) = theta_1, S(m / 2N) = theta_{2m} + theta_{2m+1} for m = 1..N-1.
PsdEstimate psd_from_params(const SpectralParams& params);

/// Factor mapping the coefficient-variance readout onto the two-sided PSD
/// scale used by the classic multitaper estimate: 2K / N. Follows from
/// matching the expected energy sum_k x_k^2 of x = A z against the Parseval
/// integral of the eigen-spectrum.
double spectral_scale(int bin_count, int freq_bins);

}  // namespace pmtm
