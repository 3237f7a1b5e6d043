#pragma once

// Brute-force reference implementations used only by the tests. None of
// these call into pmtm_core beyond plain data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Dense concentration kernel M(k, k') = sin(2 pi W (k - k')) / (pi (k - k')).
inline Eigen::MatrixXd sinc_kernel(int k, double w) {
  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const int d = i - j;
      m(i, j) = d == 0 ? 2.0 * w : std::sin(2.0 * kPi * w * d) / (kPi * d);
    }
  }
  return m;
}

// Leading eigenpairs of the sinc kernel, largest first.
struct DenseSlepian {
  Eigen::MatrixXd tapers;  // rows
  Eigen::VectorXd concentrations;
};

inline DenseSlepian dense_slepian(int k, double alpha, int j) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sinc_kernel(k, alpha / k));
  DenseSlepian out{Eigen::MatrixXd(j, k), Eigen::VectorXd(j)};
  for (int i = 0; i < j; ++i) {
    out.tapers.row(i) = es.eigenvectors().col(k - 1 - i).transpose();
    out.concentrations(i) = es.eigenvalues()(k - 1 - i);
  }
  return out;
}

inline int sign_changes(const Eigen::Ref<const Eigen::VectorXd>& v, double tiny = 0.0) {
  int changes = 0;
  double prev = 0.0;
  for (double x : v) {
    if (std::abs(x) <= tiny) continue;
    if (prev != 0.0 && (x > 0) != (prev > 0)) ++changes;
    prev = x;
  }
  return changes;
}

// |sum_{k=1}^K exp(-i 2 pi f k) v_k x_k|^2, accumulated in complex arithmetic.
inline double tapered_power(const Eigen::VectorXd& x, const Eigen::VectorXd& v, double f) {
  std::complex<double> acc{0.0, 0.0};
  for (int k = 0; k < x.size(); ++k) {
    acc += std::polar(v(k) * x(k), -2.0 * kPi * f * (k + 1));
  }
  return std::norm(acc);
}

// x_k = 2/N [a_1 + sum_{m=1}^{N-1} (a_{m+1} cos(k m pi / N) - b_{m+1} sin(k m pi / N))]
// with z = (a_1, a_2, b_2, ...).
inline Eigen::VectorXd reconstruct(const Eigen::VectorXd& z, int k_bins, int n) {
  Eigen::VectorXd x(k_bins);
  for (int k = 1; k <= k_bins; ++k) {
    double s = z(0);
    for (int m = 1; m < n; ++m) {
      s += z(2 * m - 1) * std::cos(k * m * kPi / n) - z(2 * m) * std::sin(k * m * kPi / n);
    }
    x(k - 1) = 2.0 / n * s;
  }
  return x;
}

// sigma^2 / |1 - sum a_i exp(-i 2 pi f i)|^2 in complex arithmetic.
inline double ar_psd(const std::vector<double>& a, double sigma, double f) {
  std::complex<double> d{1.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    d -= a[i] * std::polar(1.0, -2.0 * kPi * f * static_cast<double>(i + 1));
  }
  return sigma * sigma / std::norm(d);
}

// Durand-Kerner roots of z^p - a_1 z^{p-1} - ... - a_p.
inline std::vector<std::complex<double>> ar_roots(const std::vector<double>& a) {
  const std::size_t p = a.size();
  std::vector<std::complex<double>> r(p);
  for (std::size_t i = 0; i < p; ++i) r[i] = std::pow(std::complex<double>(0.4, 0.9), static_cast<double>(i));
  auto poly = [&](std::complex<double> z) {
    std::complex<double> v = 1.0;
    for (double c : a) v = v * z - c;
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      std::complex<double> den = 1.0;
      for (std::size_t j = 0; j < p; ++j) {
        if (j != i) den *= r[i] - r[j];
      }
      const std::complex<double> step = poly(r[i]) / den;
      r[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15) break;
  }
  return r;
}

// Angles (cycles/sample) of roots in the upper half plane.
inline std::vector<double> ar_pole_angles(const std::vector<double>& a) {
  std::vector<double> out;
  for (const auto& z : ar_roots(a)) {
    if (z.imag() > 1e-9) out.push_back(std::arg(z) / (2.0 * kPi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Element-by-element auxiliary statistic.
struct ScalarAux {
  Eigen::MatrixXd values;
  Eigen::VectorXd offsets;
};

inline ScalarAux aux_statistic(const Eigen::MatrixXd& spikes, const Eigen::VectorXd& taper, double mu) {
  double s = 0.0;
  for (double t : taper) s = std::max(s, std::abs(t));
  ScalarAux out{Eigen::MatrixXd(spikes.rows(), spikes.cols()), Eigen::VectorXd(spikes.cols())};
  for (int k = 0; k < spikes.cols(); ++k) {
    const double u = taper(k) / s;
    out.offsets(k) = u >= 0 ? mu * u : -(1.0 - mu) * u;
    for (int l = 0; l < spikes.rows(); ++l) {
      out.values(l, k) = u >= 0 ? spikes(l, k) * u : -(1.0 - spikes(l, k)) * u;
    }
  }
  return out;
}

// Data log-likelihood plus Gaussian prior, summed term by term.
inline double log_likelihood(const Eigen::VectorXd& z, const Eigen::VectorXd& theta,
                             const Eigen::MatrixXd& values, const Eigen::VectorXd& offsets, int n) {
  const Eigen::VectorXd x = reconstruct(z, static_cast<int>(values.cols()), n);
  double total = 0.0;
  for (int k = 0; k < values.cols(); ++k) {
    const double p = offsets(k) + x(k);
    for (int l = 0; l < values.rows(); ++l) {
      total += values(l, k) * std::log(p) + (1.0 - values(l, k)) * std::log(1.0 - p);
    }
  }
  for (int m = 0; m < z.size(); ++m) total -= z(m) * z(m) / (2.0 * theta(m)) + 0.5 * std::log(theta(m));
  return total;
}

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& z, double h) {
  Eigen::VectorXd g(z.size());
  for (int i = 0; i < z.size(); ++i) {
    Eigen::VectorXd zp = z, zm = z;
    zp(i) += h;
    zm(i) -= h;
    g(i) = (f(zp) - f(zm)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
                                   const Eigen::VectorXd& z, double h) {
  Eigen::MatrixXd j(z.size(), z.size());
  for (int i = 0; i < z.size(); ++i) {
    Eigen::VectorXd zp = z, zm = z;
    zp(i) += h;
    zm(i) -= h;
    j.col(i) = (g(zp) - g(zm)) / (2.0 * h);
  }
  return j;
}

// Second differences of function values only.
inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& z, double h) {
  const int n = static_cast<int>(z.size());
  Eigen::MatrixXd hess(n, n);
  const double f0 = f(z);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd zp = z, zm = z;
    zp(i) += h;
    zm(i) -= h;
    hess(i, i) = (f(zp) - 2.0 * f0 + f(zm)) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd a = z, b = z, c = z, d = z;
      a(i) += h; a(j) += h;
      b(i) += h; b(j) -= h;
      c(i) -= h; c(j) += h;
      d(i) -= h; d(j) -= h;
      hess(i, j) = hess(j, i) = (f(a) - f(b) - f(c) + f(d)) / (4.0 * h * h);
    }
  }
  return hess;
}

// Maximizes f over a box by repeated grid refinement around the best node.
// Points where f is not finite are skipped.
inline Eigen::VectorXd grid_search(const std::function<double(const Eigen::VectorXd&)>& f,
                                   Eigen::VectorXd center, double half_width, int nodes, int levels,
                                   double shrink) {
  const int dim = static_cast<int>(center.size());
  for (int level = 0; level < levels; ++level) {
    Eigen::VectorXd best = center;
    double best_value = f(center);
    if (!std::isfinite(best_value)) best_value = -INFINITY;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
      Eigen::VectorXd z(dim);
      for (int d = 0; d < dim; ++d) {
        z(d) = center(d) - half_width + 2.0 * half_width * idx[static_cast<std::size_t>(d)] / (nodes - 1);
      }
      const double v = f(z);
      if (std::isfinite(v) && v > best_value) {
        best_value = v;
        best = z;
      }
      int d = 0;
      while (d < dim && ++idx[static_cast<std::size_t>(d)] == nodes) idx[static_cast<std::size_t>(d++)] = 0;
      if (d == dim) break;
    }
    center = best;
    half_width *= shrink;
  }
  return center;
}

}  // namespace oracle
