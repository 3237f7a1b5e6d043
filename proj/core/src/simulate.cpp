#include "pmtm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pmtm/errors.hpp"

namespace pmtm {

namespace {

std::vector<std::complex<double>> companion_roots(const std::vector<double>& coeffs) {
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  if (p == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = coeffs[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(solver.eigenvalues().begin(), solver.eigenvalues().end());
  return roots;
}

}  // namespace

ArModel::ArModel(std::vector<double> coeffs, double noise_std)
    : coeffs_(std::move(coeffs)), noise_std_(noise_std) {
  if (!(noise_std_ > 0.0) || !std::isfinite(noise_std_)) {
    throw InputError("AR noise standard deviation must be positive");
  }
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw InputError("AR coefficients must be finite");
  }
  poles_ = companion_roots(coeffs_);
  if (max_pole_modulus() >= 1.0) {
    throw InputError("AR model is not stable: max pole modulus " +
                     std::to_string(max_pole_modulus()));
  }
}

ArModel ArModel::benchmark() {
  return ArModel({0.4152, -0.0922, 0.4170, -0.8852}, 0.025);
}

double ArModel::max_pole_modulus() const noexcept {
  double r = 0.0;
  for (const auto& z : poles_) r = std::max(r, std::abs(z));
  return r;
}

int ArModel::default_burn_in() const noexcept {
  if (coeffs_.empty()) return 0;
  const double raw = 10.0 * order() / (1.0 - max_pole_modulus());
  return static_cast<int>(std::min(std::ceil(raw), 4096.0));
}

double ArModel::stationary_variance() const {
  const int p = order();
  if (p == 0) return noise_std_ * noise_std_;
  // Unknowns gamma_0..gamma_p.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p + 1, p + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
  for (int h = 0; h <= p; ++h) {
    m(h, h) += 1.0;
    for (int i = 1; i <= p; ++i) m(h, std::abs(h - i)) -= coeffs_[static_cast<std::size_t>(i - 1)];
  }
  rhs(0) = noise_std_ * noise_std_;
  return m.partialPivLu().solve(rhs)(0);
}

std::vector<double> ArModel::pole_frequencies() const {
  std::vector<std::complex<double>> upper;
  for (const auto& z : poles_) {
    if (z.imag() > 0.0) upper.push_back(z);
  }
  std::sort(upper.begin(), upper.end(),
            [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
  std::vector<double> freqs;
  freqs.reserve(upper.size());
  for (const auto& z : upper) freqs.push_back(std::arg(z) / (2.0 * std::numbers::pi));
  return freqs;
}

SpikeEnsemble::SpikeEnsemble(Eigen::MatrixXd trials) : trials_(std::move(trials)) {
  if (trials_.rows() < 1 || trials_.cols() < 1) {
    throw InputError("spike ensemble must have at least one trial and one bin");
  }
  for (Eigen::Index i = 0; i < trials_.size(); ++i) {
    const double v = trials_.data()[i];
    if (v != 0.0 && v != 1.0) throw InputError("spike entries must be 0 or 1");
  }
}

LatentSeries simulate_ar(const ArModel& model, int length, std::uint64_t seed,
                         std::optional<int> burn_in) {
  if (length < 1) throw InputError("series length must be at least 1");
  const int discard = burn_in.value_or(model.default_burn_in());
  if (discard < 0) throw InputError("burn-in must be non-negative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, model.noise_std());
  const auto& a = model.coeffs();
  const int p = model.order();
  const int total = discard + length;

  std::vector<double> x(static_cast<std::size_t>(total), 0.0);
  for (int k = 0; k < total; ++k) {
    double v = noise(rng);
    for (int i = 1; i <= p && k - i >= 0; ++i) {
      v += a[static_cast<std::size_t>(i - 1)] * x[static_cast<std::size_t>(k - i)];
    }
    x[static_cast<std::size_t>(k)] = v;
  }

  LatentSeries out;
  out.values = Eigen::Map<const Eigen::VectorXd>(x.data() + discard, length);
  out.seed = seed;
  out.burn_in = discard;
  return out;
}

PsdEstimate ar_true_psd(const ArModel& model, const std::vector<double>& freqs) {
  PsdEstimate psd;
  psd.freqs = freqs;
  psd.power.reserve(freqs.size());
  psd.estimator = "ar-true";
  const double var = model.noise_std() * model.noise_std();
  const auto& a = model.coeffs();
  for (double f : freqs) {
    std::complex<double> denom = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      denom -= a[i] * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(i + 1));
    }
    psd.power.push_back(var / std::norm(denom));
  }
  return psd;
}

Cif linear_link_cif(const LatentSeries& latent, double mean_rate) {
  Cif cif;
  cif.rates = (latent.values.array() + mean_rate).matrix();
  for (auto& r : cif.rates) {
    if (r < 0.0 || r > 1.0) {
      r = std::clamp(r, 0.0, 1.0);
      ++cif.clamped;
    }
  }
  return cif;
}

SpikeEnsemble generate_spikes(const Eigen::VectorXd& cif, int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("trial count must be at least 1");
  if (cif.size() < 1) throw InputError("CIF must have at least one bin");
  for (double r : cif) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputError("CIF values must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd spikes(trials, cif.size());
  for (int l = 0; l < trials; ++l) {
    for (Eigen::Index k = 0; k < cif.size(); ++k) {
      spikes(l, k) = uniform(rng) < cif(k) ? 1.0 : 0.0;
    }
  }
  return SpikeEnsemble(std::move(spikes));
}

}  // namespace pmtm
