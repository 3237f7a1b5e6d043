#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "pmtm/aux_stats.hpp"
#include "pmtm/spectral_model.hpp"

namespace pmtm {

/// Iteration limits and tolerances for the EM loop and the inner Newton
/// solver of the E-step.
struct EmConfig {
  int max_em_iters = 50;
  double em_tol = 1e-4;          // relative change ||theta' - theta|| / ||theta||
  int max_newton_iters = 100;
  double newton_grad_tol = 1e-6;  // absolute gradient norm
  double armijo_c = 1e-4;
  double backtrack_ratio = 0.5;
  double boundary_margin = 1e-8;  // iterates keep rates in [eps, 1 - eps]
  double barrier_weight = 1e-6;   // per-trial log-barrier on the rates, see e_step_mode
  double initial_theta = 1e-2;
};

/// Throws InputError unless every limit is positive, armijo_c and
/// backtrack_ratio are in (0, 1), 0 < boundary_margin < 1e-3 and
/// barrier_weight >= 0.
void validate(const EmConfig& cfg);

struct EmIterationRecord {
  double log_likelihood = 0.0;  // complete-data log-likelihood at the E-step mode
  double theta_rel_change = 0.0;
  int newton_iterations = 0;
  int active_constraints = 0;   // bins within 2 eps of a rate bound at the mode
  int jitter_events = 0;
  bool newton_converged = false;
  std::vector<double> newton_objectives;  // E-step objective at the start and after each accepted step
};

struct EmTrace {
  std::vector<EmIterationRecord> iterations;
  bool converged = false;
  int clamped_offsets = 0;  // offsets moved into [eps, 1 - eps]
};

/// Bernoulli log-likelihood of an auxiliary statistic under rates
/// p = offsets + A z, with the real-valued statistic entering as the success
/// count. Column sums of the statistic are precomputed so that evaluations
/// cost O(K N).
class TaperedLikelihood {
 public:
  /// When clamp_margin > 0, offsets are clamped into [margin, 1 - margin].
  /// Throws InputError if offsets fall outside [0, 1] or dimensions disagree.
  TaperedLikelihood(const AuxStatistic& aux, const DesignMatrix& design, double clamp_margin = 0.0);

  [[nodiscard]] const DesignMatrix& design() const noexcept { return *design_; }
  [[nodiscard]] const Eigen::VectorXd& offsets() const noexcept { return offsets_; }
  [[nodiscard]] int clamped_offsets() const noexcept { return clamped_; }

  [[nodiscard]] Eigen::VectorXd rates(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  /// Data term sum_k [c_k log p_k + (L - c_k) log(1 - p_k)]; requires p in (0, 1).
  [[nodiscard]] double data_term(const Eigen::Ref<const Eigen::VectorXd>& rates) const;
  /// d(data term)/dp_k.
  [[nodiscard]] Eigen::VectorXd rate_gradient(const Eigen::Ref<const Eigen::VectorXd>& rates) const;
  /// -d^2(data term)/dp_k^2 (non-negative).
  [[nodiscard]] Eigen::VectorXd rate_curvature(const Eigen::Ref<const Eigen::VectorXd>& rates) const;

 private:
  const DesignMatrix* design_;
  Eigen::VectorXd counts_;  // sum over trials of the statistic
  Eigen::VectorXd offsets_;
  double trials_;
  int clamped_ = 0;
};

/// Data log-likelihood plus the Gaussian prior terms
/// -z_m^2 / (2 theta_m) - log(theta_m) / 2. Throws NumericalError if some
/// rate offsets + (A z)_k is not strictly inside (0, 1).
double complete_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& z,
                               const SpectralParams& theta, const AuxStatistic& aux,
                               const DesignMatrix& design);

/// Gradient of complete_log_likelihood with respect to z.
Eigen::VectorXd complete_log_likelihood_gradient(const Eigen::Ref<const Eigen::VectorXd>& z,
                                                 const SpectralParams& theta,
                                                 const AuxStatistic& aux,
                                                 const DesignMatrix& design);

/// Hessian of complete_log_likelihood with respect to z.
Eigen::MatrixXd complete_log_likelihood_hessian(const Eigen::Ref<const Eigen::VectorXd>& z,
                                                const SpectralParams& theta,
                                                const AuxStatistic& aux,
                                                const DesignMatrix& design);

struct EStepResult {
  LatentPosterior posterior;
  EmIterationRecord report;  // log_likelihood and theta_rel_change left at 0
};

enum class CovarianceOutput {
  full,      // posterior.covariance and posterior.marginal_variances
  marginal,  // posterior.marginal_variances only; covariance left empty
};

/// Laplace approximation of p(z | data, theta).
///
/// The mode maximizes the data log-likelihood minus sum z_m^2 / (2 theta_m)
/// over {z : eps <= offsets + A z <= 1 - eps}. Bins whose statistic is
/// identically zero (or one) put the constrained maximum on the boundary of
/// that set, so the Newton iteration maximizes the objective plus
/// barrier_weight * L * sum_k [log p_k + log(1 - p_k)], which keeps such bins
/// at rates of order barrier_weight. Steps are damped Newton directions
/// capped so no rate covers more than 99% of its distance to the eps margin,
/// then Armijo-backtracked.
/// Iteration stops when the gradient norm drops below newton_grad_tol, when
/// no step is acceptable, or at max_newton_iters.
///
/// The covariance is the inverse negative Hessian of the complete-data
/// log-likelihood (without the barrier) at the mode. An infeasible warm start
/// falls back to z = 0.
EStepResult e_step_mode(const SpectralParams& theta, const AuxStatistic& aux,
                        const DesignMatrix& design, const EmConfig& cfg,
                        const std::optional<Eigen::VectorXd>& warm_start = std::nullopt,
                        CovarianceOutput output = CovarianceOutput::full);

/// theta_m = mean_m^2 + Var(z_m), reading the marginal variances (or the
/// covariance diagonal when they are absent).
SpectralParams m_step(const LatentPosterior& posterior);

struct EigenSpectrumFit {
  SpectralParams params;
  LatentPosterior posterior;  // at the final E-step
  EmTrace trace;
};

/// EM over theta for one auxiliary statistic, warm-starting each E-step from
/// the previous mode, until the relative theta change drops below em_tol or
/// max_em_iters is reached.
EigenSpectrumFit estimate_eigen_spectrum(const AuxStatistic& aux, const DesignMatrix& design,
                                         const EmConfig& cfg);

}  // namespace pmtm
