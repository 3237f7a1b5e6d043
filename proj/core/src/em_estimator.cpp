#include "pmtm/em_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmtm/errors.hpp"

namespace pmtm {

namespace {

constexpr double kBoundaryFraction = 0.99;

bool strictly_inside(const Eigen::VectorXd& p, double margin) {
  for (double v : p) {
    if (!(v >= margin && v <= 1.0 - margin) || (margin == 0.0 && (v <= 0.0 || v >= 1.0))) {
      return false;
    }
  }
  return true;
}

double prior_quadratic(const Eigen::VectorXd& z, const Eigen::VectorXd& inv_theta) {
  return 0.5 * z.cwiseAbs2().dot(inv_theta);
}

// Cholesky of `m`, adding delta * I (1e-10 doubling to 1e-6) if needed.
Eigen::LLT<Eigen::MatrixXd> factor_with_jitter(Eigen::MatrixXd m, int& jitter_events) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  for (double delta = 1e-10; delta <= 1e-6 * (1.0 + 1e-12); delta *= 2.0) {
    ++jitter_events;
    m.diagonal().array() += delta;
    llt.compute(m);
    if (llt.info() == Eigen::Success) return llt;
    m.diagonal().array() -= delta;
  }
  throw NumericalError("negative Hessian is not positive definite even after jitter");
}

// E-step objective with the rate barrier.
struct Objective {
  const TaperedLikelihood& lik;
  Eigen::VectorXd inv_theta;
  double barrier;

  double operator()(const Eigen::VectorXd& z, const Eigen::VectorXd& p) const {
    double value = lik.data_term(p) - prior_quadratic(z, inv_theta);
    if (barrier > 0.0) value += barrier * (p.array().log() + (-p.array()).log1p()).sum();
    return value;
  }
  Eigen::VectorXd rate_gradient(const Eigen::VectorXd& p) const {
    Eigen::VectorXd g = lik.rate_gradient(p);
    if (barrier > 0.0) g.array() += barrier * (1.0 / p.array() - 1.0 / (1.0 - p.array()));
    return g;
  }
  Eigen::VectorXd rate_curvature(const Eigen::VectorXd& p) const {
    Eigen::VectorXd w = lik.rate_curvature(p);
    if (barrier > 0.0) {
      w.array() += barrier * (1.0 / p.array().square() + 1.0 / (1.0 - p.array()).square());
    }
    return w;
  }
};

}  // namespace

void validate(const EmConfig& cfg) {
  if (cfg.max_em_iters < 1) throw InputError("max_em_iters must be positive");
  if (cfg.max_newton_iters < 1) throw InputError("max_newton_iters must be positive");
  if (!(cfg.em_tol > 0.0)) throw InputError("em_tol must be positive");
  if (!(cfg.newton_grad_tol > 0.0)) throw InputError("newton_grad_tol must be positive");
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) throw InputError("armijo_c must lie in (0, 1)");
  if (!(cfg.backtrack_ratio > 0.0 && cfg.backtrack_ratio < 1.0)) {
    throw InputError("backtrack_ratio must lie in (0, 1)");
  }
  if (!(cfg.boundary_margin > 0.0 && cfg.boundary_margin < 1e-3)) {
    throw InputError("boundary_margin must lie in (0, 1e-3)");
  }
  if (!(cfg.barrier_weight >= 0.0) || !std::isfinite(cfg.barrier_weight)) {
    throw InputError("barrier_weight must be non-negative");
  }
  if (!(cfg.initial_theta > 0.0) || !std::isfinite(cfg.initial_theta)) {
    throw InputError("initial_theta must be positive");
  }
}

TaperedLikelihood::TaperedLikelihood(const AuxStatistic& aux, const DesignMatrix& design,
                                     double clamp_margin)
    : design_(&design), trials_(static_cast<double>(aux.trial_count())) {
  if (aux.bin_count() != design.bin_count() || aux.offsets.size() != design.bin_count()) {
    throw InputError("auxiliary statistic and design matrix disagree on bin count");
  }
  if (aux.trial_count() < 1) throw InputError("auxiliary statistic has no trials");
  counts_ = aux.values.colwise().sum().transpose();
  offsets_ = aux.offsets;
  for (auto& mu : offsets_) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw InputError("auxiliary offsets must lie in [0, 1]");
    if (clamp_margin > 0.0 && (mu < clamp_margin || mu > 1.0 - clamp_margin)) {
      mu = std::clamp(mu, clamp_margin, 1.0 - clamp_margin);
      ++clamped_;
    }
  }
}

Eigen::VectorXd TaperedLikelihood::rates(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return offsets_ + design_->apply(z);
}

double TaperedLikelihood::data_term(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  double total = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double c = counts_(k);
    const double miss = trials_ - c;
    if (c != 0.0) total += c * std::log(p(k));
    if (miss != 0.0) total += miss * std::log1p(-p(k));
  }
  return total;
}

Eigen::VectorXd TaperedLikelihood::rate_gradient(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return (counts_.array() / p.array() - (trials_ - counts_.array()) / (1.0 - p.array())).matrix();
}

Eigen::VectorXd TaperedLikelihood::rate_curvature(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  return (counts_.array() / p.array().square() +
          (trials_ - counts_.array()) / (1.0 - p.array()).square())
      .matrix();
}

namespace {

TaperedLikelihood checked_likelihood(const Eigen::Ref<const Eigen::VectorXd>& z,
                                     const SpectralParams& theta, const AuxStatistic& aux,
                                     const DesignMatrix& design, Eigen::VectorXd& p) {
  validate(theta);
  if (theta.variances.size() != design.parameter_count() || z.size() != design.parameter_count()) {
    throw InputError("parameter dimension differs from design matrix");
  }
  TaperedLikelihood lik(aux, design);
  p = lik.rates(z);
  if (!strictly_inside(p, 0.0)) {
    throw NumericalError("infeasible point: some rate lies outside (0, 1)");
  }
  return lik;
}

}  // namespace

double complete_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& z,
                               const SpectralParams& theta, const AuxStatistic& aux,
                               const DesignMatrix& design) {
  Eigen::VectorXd p;
  const TaperedLikelihood lik = checked_likelihood(z, theta, aux, design, p);
  const Eigen::VectorXd inv_theta = theta.variances.cwiseInverse();
  return lik.data_term(p) - prior_quadratic(z, inv_theta) -
         0.5 * theta.variances.array().log().sum();
}

Eigen::VectorXd complete_log_likelihood_gradient(const Eigen::Ref<const Eigen::VectorXd>& z,
                                                 const SpectralParams& theta,
                                                 const AuxStatistic& aux,
                                                 const DesignMatrix& design) {
  Eigen::VectorXd p;
  const TaperedLikelihood lik = checked_likelihood(z, theta, aux, design, p);
  return design.apply_transpose(lik.rate_gradient(p)) -
         z.cwiseQuotient(theta.variances);
}

Eigen::MatrixXd complete_log_likelihood_hessian(const Eigen::Ref<const Eigen::VectorXd>& z,
                                                const SpectralParams& theta,
                                                const AuxStatistic& aux,
                                                const DesignMatrix& design) {
  Eigen::VectorXd p;
  const TaperedLikelihood lik = checked_likelihood(z, theta, aux, design, p);
  Eigen::MatrixXd h = -design.weighted_gram(lik.rate_curvature(p));
  h.diagonal() -= theta.variances.cwiseInverse();
  return h;
}

EStepResult e_step_mode(const SpectralParams& theta, const AuxStatistic& aux,
                        const DesignMatrix& design, const EmConfig& cfg,
                        const std::optional<Eigen::VectorXd>& warm_start, CovarianceOutput output) {
  validate(theta);
  validate(cfg);
  const Eigen::Index n = design.parameter_count();
  if (theta.variances.size() != n) throw InputError("parameter dimension differs from design matrix");

  const double eps = cfg.boundary_margin;
  const TaperedLikelihood lik(aux, design, eps);
  // Scaled by L so that an all-zero bin settles near p = barrier_weight
  // whatever the ensemble size.
  const Objective objective{lik, theta.variances.cwiseInverse(),
                            cfg.barrier_weight * static_cast<double>(aux.trial_count())};

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd p = lik.rates(z);
  if (warm_start && warm_start->size() == n) {
    Eigen::VectorXd pw = lik.rates(*warm_start);
    if (strictly_inside(pw, eps)) {
      z = *warm_start;
      p = std::move(pw);
    }
  }
  if (!strictly_inside(p, eps)) {
    throw NumericalError("degenerate offsets: no feasible interior starting point");
  }

  EStepResult result;
  EmIterationRecord& report = result.report;
  double value = objective(z, p);
  report.newton_objectives.push_back(value);

  for (int it = 0;; ++it) {
    const Eigen::VectorXd grad =
        design.apply_transpose(objective.rate_gradient(p)) - z.cwiseProduct(objective.inv_theta);
    if (grad.norm() < cfg.newton_grad_tol) {
      report.newton_converged = true;
      break;
    }
    if (it == cfg.max_newton_iters) break;

    Eigen::MatrixXd neg_hessian = design.weighted_gram(objective.rate_curvature(p));
    neg_hessian.diagonal() += objective.inv_theta;
    const Eigen::LLT<Eigen::MatrixXd> llt =
        factor_with_jitter(std::move(neg_hessian), report.jitter_events);
    const Eigen::VectorXd step = llt.solve(grad);
    const Eigen::VectorXd dp = design.apply(step);

    // Fraction-to-boundary: no rate may cover more than kBoundaryFraction of
    // its remaining distance to the eps margin. Landing exactly on the margin
    // would leave no room for any later step.
    double alpha = 1.0;
    for (Eigen::Index k = 0; k < dp.size(); ++k) {
      if (dp(k) > 0.0) {
        alpha = std::min(alpha, kBoundaryFraction * (1.0 - eps - p(k)) / dp(k));
      } else if (dp(k) < 0.0) {
        alpha = std::min(alpha, kBoundaryFraction * (eps - p(k)) / dp(k));
      }
    }
    alpha = std::max(alpha, 0.0);

    const double slope = grad.dot(step);
    // Newton decrement: predicted gain of the full step is slope / 2.
    if (0.5 * slope <= 1e-12 * (1.0 + std::abs(value))) {
      report.newton_converged = true;
      break;
    }
    bool accepted = false;
    Eigen::VectorXd z_new;
    Eigen::VectorXd p_new;
    double value_new = value;
    while (alpha > std::numeric_limits<double>::epsilon()) {
      z_new = z + alpha * step;
      p_new = lik.rates(z_new);
      if (strictly_inside(p_new, eps)) {
        value_new = objective(z_new, p_new);
        if (value_new >= value + cfg.armijo_c * alpha * slope) {
          accepted = true;
          break;
        }
      }
      alpha *= cfg.backtrack_ratio;
    }
    if (!accepted) break;

    z = std::move(z_new);
    p = std::move(p_new);
    value = value_new;
    ++report.newton_iterations;
    report.newton_objectives.push_back(value);
  }

  for (double v : p) {
    if (v <= 2.0 * eps || v >= 1.0 - 2.0 * eps) ++report.active_constraints;
  }

  Eigen::MatrixXd precision = design.weighted_gram(lik.rate_curvature(p));
  precision.diagonal() += objective.inv_theta;
  const Eigen::LLT<Eigen::MatrixXd> llt = factor_with_jitter(std::move(precision), report.jitter_events);

  LatentPosterior& post = result.posterior;
  post.mean = std::move(z);
  if (output == CovarianceOutput::full) {
    post.covariance = llt.solve(Eigen::MatrixXd::Identity(n, n));
    post.covariance = 0.5 * (post.covariance + post.covariance.transpose());
    post.marginal_variances = post.covariance.diagonal();
  } else {
    // diag(P^-1) = squared column norms of L^-1 for P = L L'.
    Eigen::MatrixXd l_inv = Eigen::MatrixXd::Identity(n, n);
    llt.matrixL().solveInPlace(l_inv);
    post.marginal_variances = l_inv.colwise().squaredNorm().transpose();
  }
  return result;
}

SpectralParams m_step(const LatentPosterior& posterior) {
  const Eigen::Index n = posterior.mean.size();
  Eigen::VectorXd variances;
  if (posterior.marginal_variances.size() == n) {
    variances = posterior.marginal_variances;
  } else if (posterior.covariance.rows() == n && posterior.covariance.cols() == n) {
    variances = posterior.covariance.diagonal();
  } else {
    throw InputError("posterior mean and covariance dimensions disagree");
  }
  SpectralParams params;
  params.variances = posterior.mean.cwiseAbs2() + variances;
  for (double v : params.variances) {
    if (!(v > 0.0) || !std::isfinite(v)) throw NumericalError("M-step produced a non-positive variance");
  }
  return params;
}

EigenSpectrumFit estimate_eigen_spectrum(const AuxStatistic& aux, const DesignMatrix& design,
                                         const EmConfig& cfg) {
  validate(cfg);
  const Eigen::Index n = design.parameter_count();

  EigenSpectrumFit fit;
  fit.params.variances = Eigen::VectorXd::Constant(n, cfg.initial_theta);
  const TaperedLikelihood lik(aux, design, cfg.boundary_margin);
  fit.trace.clamped_offsets = lik.clamped_offsets();

  std::optional<Eigen::VectorXd> warm;
  for (int iter = 0; iter < cfg.max_em_iters; ++iter) {
    EStepResult e = e_step_mode(fit.params, aux, design, cfg, warm, CovarianceOutput::marginal);
    SpectralParams next = m_step(e.posterior);
    next.truncation_bound = fit.params.truncation_bound;

    EmIterationRecord record = std::move(e.report);
    const Eigen::VectorXd& mode = e.posterior.mean;
    record.log_likelihood = lik.data_term(lik.rates(mode)) -
                            prior_quadratic(mode, fit.params.variances.cwiseInverse()) -
                            0.5 * fit.params.variances.array().log().sum();
    record.theta_rel_change =
        (next.variances - fit.params.variances).norm() / fit.params.variances.norm();
    const bool done = record.theta_rel_change < cfg.em_tol;
    fit.trace.iterations.push_back(std::move(record));

    fit.params = std::move(next);
    warm = e.posterior.mean;
    fit.posterior = std::move(e.posterior);
    if (done) {
      fit.trace.converged = true;
      break;
    }
  }
  return fit;
}

}  // namespace pmtm
