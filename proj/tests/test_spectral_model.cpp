#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pmtm/errors.hpp"
#include "pmtm/spectral_model.hpp"

using namespace pmtm;

namespace {

Eigen::VectorXd gaussian(int n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sd);
  Eigen::VectorXd x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

}  // namespace

TEST_SUITE("spectral-model") {

TEST_CASE("K=1, N=2 row is [1, 0, -1]") {
  const DesignMatrix a(1, 2);
  REQUIRE(a.entries().rows() == 1);
  REQUIRE(a.entries().cols() == 3);
  CHECK(a.entries()(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(a.entries()(0, 1)) < 1e-15);
  CHECK(a.entries()(0, 2) == doctest::Approx(-1.0));
}

TEST_CASE("entries match the scalar column definitions and are bounded by 2/N") {
  const int k = 40, n = 12;
  const DesignMatrix a(k, n);
  CHECK(a.parameter_count() == 2 * n - 1);
  for (int kk = 1; kk <= k; ++kk) {
    CHECK(a.entries()(kk - 1, 0) == doctest::Approx(2.0 / n));
    for (int m = 1; m < n; ++m) {
      CHECK(a.entries()(kk - 1, 2 * m - 1) == doctest::Approx(2.0 / n * std::cos(kk * m * oracle::kPi / n)));
      CHECK(a.entries()(kk - 1, 2 * m) == doctest::Approx(-2.0 / n * std::sin(kk * m * oracle::kPi / n)));
    }
  }
  CHECK(a.entries().cwiseAbs().maxCoeff() <= 2.0 / n + 1e-15);
}

TEST_CASE("DC unit vector reconstructs a constant 2/N") {
  const DesignMatrix a(17, 5);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(9);
  z(0) = 1.0;
  const Eigen::VectorXd x = a.apply(z);
  for (double v : x) CHECK(v == doctest::Approx(0.4));
}

TEST_CASE("reconstruction equals the termwise sum for random and cosine-only z") {
  const int k = 96, n = 48;
  const DesignMatrix a(k, n);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Eigen::VectorXd z = gaussian(2 * n - 1, seed);
    CHECK((a.apply(z) - oracle::reconstruct(z, k, n)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a.apply(z) - a.entries() * z).cwiseAbs().maxCoeff() < 1e-10);
    for (int m = 1; m < n; ++m) z(2 * m) = 0.0;
    CHECK((a.apply(z) - oracle::reconstruct(z, k, n)).cwiseAbs().maxCoeff() < 1e-10);
  }
  const Eigen::VectorXd r = gaussian(k, 9);
  CHECK((a.apply_transpose(r) - a.entries().transpose() * r).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("weighted Gram equals the dense product") {
  for (auto [k, n] : {std::pair{64, 32}, std::pair{50, 7}, std::pair{3, 2}, std::pair{10, 20}}) {
    CAPTURE(k);
    CAPTURE(n);
    const DesignMatrix a(k, n);
    const Eigen::VectorXd w = gaussian(k, 4).cwiseAbs();
    const Eigen::MatrixXd dense = a.entries().transpose() * w.asDiagonal() * a.entries();
    CHECK((a.weighted_gram(w) - dense).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + dense.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("time-domain variance of A z matches diag(A Theta A') (Monte-Carlo)") {
  const int k = 32, n = 16;
  const DesignMatrix a(k, n);
  const Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(2 * n - 1, 0.5, 2.0);
  const double analytic =
      (a.entries() * theta.asDiagonal() * a.entries().transpose()).diagonal().mean();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double acc = 0.0;
  const int draws = 100000;
  Eigen::VectorXd z(2 * n - 1);
  for (int d = 0; d < draws; ++d) {
    for (int m = 0; m < z.size(); ++m) z(m) = std::sqrt(theta(m)) * g(rng);
    acc += a.apply(z).squaredNorm() / k;
  }
  CHECK(acc / draws == doctest::Approx(analytic).epsilon(0.02));
}

TEST_CASE("PSD readout") {
  SpectralParams p;
  p.variances = Eigen::VectorXd::Constant(7, 1e-12);
  p.variances(0) = 1.0;
  auto psd = psd_from_params(p);
  REQUIRE(psd.size() == 4);
  CHECK(psd.power[0] == 1.0);
  for (int m = 1; m < 4; ++m) CHECK(psd.power[static_cast<std::size_t>(m)] < 1e-11);
  CHECK(psd.freqs[1] == doctest::Approx(1.0 / 8.0));

  p.variances(3) = p.variances(4) = 0.25;
  psd = psd_from_params(p);
  CHECK(psd.power[2] == doctest::Approx(0.5));

  p.variances = Eigen::VectorXd::Constant(7, 0.3);
  psd = psd_from_params(p);
  CHECK(psd.power[0] == doctest::Approx(0.3));
  for (int m = 1; m < 4; ++m) CHECK(psd.power[static_cast<std::size_t>(m)] == doctest::Approx(0.6));
}

TEST_CASE("spectral scale is the Parseval factor 2K/N") {
  // Energy of x = A z is sum_m theta_m |A_m|^2. A two-sided PSD that equals
  // c * readout on each bin of width 1/N carries energy (c / N) sum_m readout.
  for (auto [k, n] : {std::pair{128, 64}, std::pair{120, 40}, std::pair{64, 48}}) {
    CAPTURE(k);
    CAPTURE(n);
    const DesignMatrix a(k, n);
    Eigen::VectorXd theta = gaussian(2 * n - 1, 12).cwiseAbs();
    theta(0) = 1e-6;  // the DC column counts once rather than twice
    const double energy = a.entries().colwise().squaredNorm().dot(theta.transpose());
    SpectralParams p;
    p.variances = theta;
    const auto readout = psd_from_params(p);
    double psd_energy = 0.0;
    for (double s : readout.power) psd_energy += spectral_scale(k, n) * s / n;
    CHECK(psd_energy == doctest::Approx(energy).epsilon(0.05));
  }
  CHECK(spectral_scale(512, 256) == 4.0);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(DesignMatrix(0, 4), InputError);
  CHECK_THROWS_AS(DesignMatrix(4, 1), InputError);
  SpectralParams p;
  p.variances = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(validate(p), InputError);
  p.variances = Eigen::VectorXd::Ones(5);
  p.variances(2) = 0.0;
  CHECK_THROWS_AS(validate(p), InputError);
}

}
