#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pmtm/psd.hpp"

namespace pmtm {

/// Stable autoregressive model x_k = sum_i a_i x_{k-i} + noise_std * e_k.
class ArModel {
 public:
  /// Throws InputError if noise_std <= 0 or any root of
  /// 1 - sum a_i z^{-i} lies on or outside the unit circle.
  ArModel(std::vector<double> coeffs, double noise_std);

  /// The AR(4) benchmark process with poles near 0.1 and 0.35 cycles/sample.
  static ArModel benchmark();

  [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] double noise_std() const noexcept { return noise_std_; }
  [[nodiscard]] int order() const noexcept { return static_cast<int>(coeffs_.size()); }

  /// Roots of z^p - a_1 z^{p-1} - ... - a_p.
  [[nodiscard]] const std::vector<std::complex<double>>& poles() const noexcept { return poles_; }
  [[nodiscard]] double max_pole_modulus() const noexcept;

  /// 10 * p / (1 - max|pole|), capped at 4096.
  [[nodiscard]] int default_burn_in() const noexcept;

  /// Stationary variance from the autocovariance (Yule-Walker) equations.
  [[nodiscard]] double stationary_variance() const;

  /// Pole angles in cycles/sample for poles with positive imaginary part,
  /// ordered by decreasing modulus.
  [[nodiscard]] std::vector<double> pole_frequencies() const;

 private:
  std::vector<double> coeffs_;
  double noise_std_;
  std::vector<std::complex<double>> poles_;
};

struct LatentSeries {
  Eigen::VectorXd values;
  std::uint64_t seed = 0;
  int burn_in = 0;

  [[nodiscard]] int bin_count() const noexcept { return static_cast<int>(values.size()); }
};

/// L x K binary matrix, one row per trial.
class SpikeEnsemble {
 public:
  SpikeEnsemble() = default;
  /// Throws InputError if empty or any entry is not exactly 0 or 1.
  explicit SpikeEnsemble(Eigen::MatrixXd trials);

  [[nodiscard]] const Eigen::MatrixXd& trials() const noexcept { return trials_; }
  [[nodiscard]] int trial_count() const noexcept { return static_cast<int>(trials_.rows()); }
  [[nodiscard]] int bin_count() const noexcept { return static_cast<int>(trials_.cols()); }

 private:
  Eigen::MatrixXd trials_;
};

/// Runs the AR recursion from zero initial state, discarding `burn_in`
/// samples (model.default_burn_in() when empty). Deterministic per seed.
LatentSeries simulate_ar(const ArModel& model, int length, std::uint64_t seed,
                         std::optional<int> burn_in = std::nullopt);

/// noise_std^2 / |1 - sum a_i exp(-i 2 pi f i)|^2 at each frequency.
PsdEstimate ar_true_psd(const ArModel& model, const std::vector<double>& freqs);

struct Cif {
  Eigen::VectorXd rates;
  int clamped = 0;  // bins where mean_rate + x fell outside [0, 1]
};

/// lambda_k = mean_rate + x_k clamped to [0, 1].
Cif linear_link_cif(const LatentSeries& latent, double mean_rate);

/// L independent Bernoulli(lambda_k) draws per bin. Throws InputError if any
/// rate is outside [0, 1] or trials < 1.
SpikeEnsemble generate_spikes(const Eigen::VectorXd& cif, int trials, std::uint64_t seed);

}  // namespace pmtm
