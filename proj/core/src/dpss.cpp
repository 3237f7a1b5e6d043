#include "pmtm/dpss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pmtm/errors.hpp"

namespace pmtm {

namespace {

// Number of eigenvalues of the tridiagonal matrix strictly less than x.
int sturm_count(const SlepianTridiagonal& t, double x) {
  const Eigen::Index n = t.diagonal.size();
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double q = t.diagonal(0) - x;
  if (q < 0.0) ++count;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (std::abs(q) < tiny) q = -tiny;
    const double e = t.off_diagonal(i - 1);
    q = (t.diagonal(i) - x) - e * e / q;
    if (q < 0.0) ++count;
  }
  return count;
}

// index counts from the smallest eigenvalue (0-based).
double bisect_eigenvalue(const SlepianTridiagonal& t, int index, double lo, double hi) {
  const double scale = std::max(std::abs(lo), std::abs(hi));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) break;
    if (sturm_count(t, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Solves (T - shift I) x = b by Gaussian elimination with partial pivoting.
// Zero pivots are replaced by a tiny multiple of the matrix norm, which is the
// usual treatment when the shift is an eigenvalue.
Eigen::VectorXd shifted_solve(const SlepianTridiagonal& t, double shift, double norm,
                              Eigen::VectorXd b) {
  const Eigen::Index n = t.diagonal.size();
  Eigen::VectorXd d = t.diagonal.array() - shift;
  Eigen::VectorXd du = Eigen::VectorXd::Zero(n);   // first superdiagonal
  Eigen::VectorXd du2 = Eigen::VectorXd::Zero(n);  // second superdiagonal from pivoting
  Eigen::VectorXd dl = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    du(i) = t.off_diagonal(i);
    dl(i) = t.off_diagonal(i);
  }
  const double pivot_floor = std::numeric_limits<double>::epsilon() * norm;

  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(d(i)) >= std::abs(dl(i))) {
      if (std::abs(d(i)) < pivot_floor) d(i) = pivot_floor;
      const double m = dl(i) / d(i);
      d(i + 1) -= m * du(i);
      b(i + 1) -= m * b(i);
      dl(i) = 0.0;
    } else {
      const double m = d(i) / dl(i);
      d(i) = dl(i);
      const double tmp_d = d(i + 1);
      d(i + 1) = du(i) - m * tmp_d;
      du(i) = tmp_d;
      if (i + 2 < n) {
        du2(i) = du(i + 1);
        du(i + 1) = -m * du2(i);
      }
      std::swap(b(i), b(i + 1));
      b(i + 1) -= m * b(i);
    }
  }
  if (std::abs(d(n - 1)) < pivot_floor) d(n - 1) = pivot_floor;

  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = b(i);
    if (i + 1 < n) s -= du(i) * x(i + 1);
    if (i + 2 < n) s -= du2(i) * x(i + 2);
    x(i) = s / d(i);
  }
  return x;
}

}  // namespace

SlepianTridiagonal slepian_tridiagonal(int length, double bandwidth) {
  SlepianTridiagonal t;
  t.diagonal.resize(length);
  t.off_diagonal.resize(std::max(length - 1, 0));
  const double c = std::cos(2.0 * std::numbers::pi * bandwidth);
  for (int k = 0; k < length; ++k) {
    const double h = 0.5 * (length - 1 - 2.0 * k);
    t.diagonal(k) = h * h * c;
  }
  for (int k = 1; k < length; ++k) t.off_diagonal(k - 1) = 0.5 * k * (length - k);
  return t;
}

double sinc_concentration(const Eigen::Ref<const Eigen::VectorXd>& taper, double bandwidth) {
  const Eigen::Index n = taper.size();
  double total = 2.0 * bandwidth * taper.squaredNorm();
  for (Eigen::Index lag = 1; lag < n; ++lag) {
    const double r = taper.head(n - lag).dot(taper.tail(n - lag));
    const double kernel = std::sin(2.0 * std::numbers::pi * bandwidth * lag) /
                          (std::numbers::pi * static_cast<double>(lag));
    total += 2.0 * kernel * r;
  }
  return total;
}

TaperSet generate_dpss(int length, double alpha, int taper_count) {
  if (length < 2) throw InputError("dpss length must be at least 2");
  if (!(alpha >= 1.0)) throw InputError("half time-bandwidth product must be >= 1");
  if (!(alpha < 0.5 * length)) {
    throw InputError("half time-bandwidth product must be below length/2 (bandwidth exceeds Nyquist)");
  }
  const int max_tapers = static_cast<int>(std::floor(2.0 * alpha));
  if (taper_count < 1 || taper_count >= max_tapers) {
    throw InputError("taper count must satisfy 1 <= J < floor(2 alpha) = " +
                     std::to_string(max_tapers));
  }

  const double bandwidth = alpha / length;
  const SlepianTridiagonal t = slepian_tridiagonal(length, bandwidth);

  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (int i = 0; i < length; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.off_diagonal(i - 1));
    if (i + 1 < length) radius += std::abs(t.off_diagonal(i));
    lo = std::min(lo, t.diagonal(i) - radius);
    hi = std::max(hi, t.diagonal(i) + radius);
  }
  const double norm = std::max(std::abs(lo), std::abs(hi));

  TaperSet set;
  set.half_bandwidth_product = alpha;
  set.tapers.resize(taper_count, length);
  set.concentrations.resize(taper_count);
  set.scale_factors.resize(taper_count);

  for (int j = 0; j < taper_count; ++j) {
    const double eigenvalue = bisect_eigenvalue(t, length - 1 - j, lo, hi);

    // Start vector with components along every eigenvector.
    Eigen::VectorXd v(length);
    for (int k = 0; k < length; ++k) v(k) = 1.0 + 0.01 * std::sin(0.37 * k + 0.11 * j);
    v.normalize();
    for (int it = 0; it < 4; ++it) {
      v = shifted_solve(t, eigenvalue, norm, v);
      for (int i = 0; i < j; ++i) {
        v -= set.tapers.row(i).transpose() * set.tapers.row(i).dot(v);
      }
      v.normalize();
    }

    double orient = 0.0;
    if (j % 2 == 0) {
      orient = v.sum();
    } else {
      for (int k = 0; k < length; ++k) orient += k * v(k);
    }
    if (orient < 0.0) v = -v;

    set.tapers.row(j) = v.transpose();
    set.concentrations(j) = sinc_concentration(v, bandwidth);
    set.scale_factors(j) = v.cwiseAbs().maxCoeff();
  }
  return set;
}

}  // namespace pmtm
