#include "pmtm/spectral_model.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "pmtm/errors.hpp"

namespace pmtm {

DesignMatrix::DesignMatrix(int bin_count, int freq_bins)
    : bin_count_(bin_count), freq_bins_(freq_bins) {
  if (bin_count < 1) throw InputError("design matrix needs at least one bin");
  if (freq_bins < 2) throw InputError("design matrix needs at least two frequency bins");

  const int period = 2 * freq_bins;
  cos_table_.resize(static_cast<std::size_t>(period));
  sin_table_.resize(static_cast<std::size_t>(period));
  for (int r = 0; r < period; ++r) {
    const double angle = std::numbers::pi * r / freq_bins;
    cos_table_[static_cast<std::size_t>(r)] = std::cos(angle);
    sin_table_[static_cast<std::size_t>(r)] = std::sin(angle);
  }

  const double amp = 2.0 / freq_bins;
  entries_.resize(bin_count, parameter_count());
  for (int k = 1; k <= bin_count; ++k) {
    entries_(k - 1, 0) = amp;
    for (int m = 1; m < freq_bins; ++m) {
      const auto r = static_cast<std::size_t>((static_cast<long>(k) * m) % period);
      entries_(k - 1, 2 * m - 1) = amp * cos_table_[r];
      entries_(k - 1, 2 * m) = -amp * sin_table_[r];
    }
  }
}

Eigen::VectorXd DesignMatrix::apply(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  return entries_ * z;
}

Eigen::VectorXd DesignMatrix::apply_transpose(const Eigen::Ref<const Eigen::VectorXd>& r) const {
  return entries_.transpose() * r;
}

Eigen::MatrixXd DesignMatrix::weighted_gram(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  const int n = freq_bins_;
  const int period = 2 * n;
  const int max_q = 2 * n - 2;

  // C(q) = sum_k w_k cos(k q pi / N), S(q) likewise with sine.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(max_q + 1);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(max_q + 1);
  for (int k = 1; k <= bin_count_; ++k) {
    const double wk = w(k - 1);
    long r = 0;
    const long step = k % period;
    for (int q = 0; q <= max_q; ++q) {
      c(q) += wk * cos_table_[static_cast<std::size_t>(r)];
      s(q) += wk * sin_table_[static_cast<std::size_t>(r)];
      r += step;
      if (r >= period) r -= period;
    }
  }
  auto sine = [&s](int q) { return q >= 0 ? s(q) : -s(-q); };
  auto cos_col = [](int m) { return m == 0 ? 0 : 2 * m - 1; };

  const double scale = 0.5 * (2.0 / n) * (2.0 / n);
  Eigen::MatrixXd g(parameter_count(), parameter_count());
  for (int m = 0; m < n; ++m) {
    for (int mp = m; mp < n; ++mp) {
      const double v = scale * (c(std::abs(m - mp)) + c(m + mp));
      g(cos_col(m), cos_col(mp)) = v;
      g(cos_col(mp), cos_col(m)) = v;
    }
  }
  for (int m = 1; m < n; ++m) {
    for (int mp = m; mp < n; ++mp) {
      const double v = scale * (c(std::abs(m - mp)) - c(m + mp));
      g(2 * m, 2 * mp) = v;
      g(2 * mp, 2 * m) = v;
    }
  }
  // cos(a) * (-sin(b)) summed: -(S(a + b) + S(b - a)) / 2
  for (int m = 0; m < n; ++m) {
    for (int mp = 1; mp < n; ++mp) {
      const double v = -scale * (sine(m + mp) + sine(mp - m));
      g(cos_col(m), 2 * mp) = v;
      g(2 * mp, cos_col(m)) = v;
    }
  }
  return g;
}

void validate(const SpectralParams& params) {
  const auto n = params.variances.size();
  if (n < 1 || n % 2 == 0) throw InputError("spectral parameter vector must have odd length 2N-1");
  for (double v : params.variances) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("spectral variances must be positive");
  }
}

PsdEstimate psd_from_params(const SpectralParams& params) {
  validate(params);
  const auto& theta = params.variances;
  const int n = static_cast<int>((theta.size() + 1) / 2);
  PsdEstimate psd;
  psd.freqs = frequency_grid(n);
  psd.power.resize(static_cast<std::size_t>(n));
  psd.power[0] = theta(0);
  for (int m = 1; m < n; ++m) psd.power[static_cast<std::size_t>(m)] = theta(2 * m - 1) + theta(2 * m);
  psd.estimator = "spectral-params";
  return psd;
}

double spectral_scale(int bin_count, int freq_bins) {
  if (bin_count < 1 || freq_bins < 1) throw InputError("invalid dimensions for spectral scale");
  return 2.0 * bin_count / freq_bins;
}

}  // namespace pmtm
