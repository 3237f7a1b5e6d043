#pragma once

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pmtm/aux_stats.hpp"
#include "pmtm/dpss.hpp"
#include "pmtm/em_estimator.hpp"
#include "pmtm/simulate.hpp"

namespace fixture {

using namespace pmtm;

// N=8, K=32, L=3 instance built from a sign-changing dpss taper.
struct SmallProblem {
  DesignMatrix design{32, 8};
  AuxStatistic aux;
  SpectralParams theta;

  SmallProblem() {
    const ArModel m = ArModel::benchmark();
    const Cif cif = linear_link_cif(simulate_ar(m, 32, 31), 0.3);
    const SpikeEnsemble s = generate_spikes(cif.rates, 3, 32);
    const TaperSet set = generate_dpss(32, 2.0, 2);
    aux = build_aux_statistic(s, set.tapers.row(1).transpose(), estimate_mean_rate(s), 1);
    theta.variances = Eigen::VectorXd::LinSpaced(15, 0.002, 0.02);
  }

  // Random point with every rate in [0.02, 0.98].
  Eigen::VectorXd feasible_point(std::mt19937_64& rng) const {
    std::normal_distribution<double> g(0.0, 0.05);
    while (true) {
      Eigen::VectorXd z(15);
      for (auto& v : z) v = g(rng);
      const Eigen::VectorXd p = aux.offsets + design.apply(z);
      if (p.minCoeff() > 0.02 && p.maxCoeff() < 0.98) return z;
    }
  }
};

// K=3, N=2: the design matrix is square and the mode is interior.
struct ToyProblem {
  DesignMatrix design{3, 2};
  AuxStatistic aux;

  explicit ToyProblem(int trials = 40) {
    const Eigen::Vector3d target(0.2, 0.6, 0.35);
    aux.values.resize(trials, 3);
    for (int l = 0; l < trials; ++l) {
      for (int k = 0; k < 3; ++k) aux.values(l, k) = (l < std::lround(target(k) * trials)) ? 1.0 : 0.0;
    }
    aux.offsets = Eigen::Vector3d::Constant(0.4);
  }

  // E-step objective without the barrier.
  double objective(const Eigen::VectorXd& z, const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd p = aux.offsets + oracle::reconstruct(z, 3, 2);
    if (p.minCoeff() <= 0.0 || p.maxCoeff() >= 1.0) return -INFINITY;
    return oracle::log_likelihood(z, theta, aux.values, aux.offsets, 2);
  }
};

inline double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace fixture
