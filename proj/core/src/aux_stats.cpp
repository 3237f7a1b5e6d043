#include "pmtm/aux_stats.hpp"

#include "pmtm/errors.hpp"

namespace pmtm {

AuxStatistic build_aux_statistic(const SpikeEnsemble& spikes,
                                 const Eigen::Ref<const Eigen::VectorXd>& taper,
                                 double mean_rate, int taper_index) {
  if (taper.size() != spikes.bin_count()) throw InputError("taper length differs from bin count");
  if (!(mean_rate >= 0.0 && mean_rate <= 1.0)) throw InputError("mean rate must lie in [0, 1]");
  const double scale = taper.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw InputError("degenerate taper: all entries are zero");

  const Eigen::VectorXd u = taper / scale;
  const Eigen::MatrixXd& n = spikes.trials();

  AuxStatistic aux;
  aux.taper_index = taper_index;
  aux.taper_scale = scale;
  aux.values.resize(n.rows(), n.cols());
  aux.offsets.resize(n.cols());
  for (Eigen::Index k = 0; k < n.cols(); ++k) {
    if (u(k) >= 0.0) {
      aux.values.col(k) = n.col(k) * u(k);
      aux.offsets(k) = mean_rate * u(k);
    } else {
      aux.values.col(k) = (1.0 - n.col(k).array()).matrix() * (-u(k));
      aux.offsets(k) = -(1.0 - mean_rate) * u(k);
    }
  }
  return aux;
}

double estimate_mean_rate(const SpikeEnsemble& spikes) {
  if (spikes.trials().size() == 0) throw InputError("empty spike ensemble");
  return spikes.trials().mean();
}

}  // namespace pmtm
