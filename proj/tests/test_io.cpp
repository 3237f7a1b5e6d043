#include <doctest.h>

#include <sstream>

#include "json_io.hpp"
#include "pmtm/csv.hpp"
#include "pmtm/errors.hpp"

using namespace pmtm;

TEST_SUITE("io") {

TEST_CASE("spike CSV round trip") {
  Eigen::MatrixXd n(3, 5);
  n << 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1;
  std::stringstream ss;
  write_spike_csv(ss, SpikeEnsemble(n));
  CHECK(read_spike_csv(ss).trials() == n);
}

TEST_CASE("matrix CSV keeps full precision") {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, -1.0 / 3.0, 1e-17, 2.5e10, std::acos(-1.0), 0.0;
  std::stringstream ss;
  write_matrix_csv(ss, m);
  CHECK(read_matrix_csv(ss) == m);
}

TEST_CASE("PSD CSV round trip and header") {
  PsdEstimate p;
  p.freqs = frequency_grid(4);
  p.power = {1.0, 0.25, 1.0 / 7.0, 3e-9};
  std::stringstream ss;
  write_psd_csv(ss, p);
  CHECK(ss.str().rfind("freq,power", 0) == 0);
  const auto q = read_psd_csv(ss);
  CHECK(q.freqs == p.freqs);
  CHECK(q.power == p.power);
}

TEST_CASE("malformed CSV is rejected") {
  std::stringstream ragged("1,0,1\n0,1\n");
  CHECK_THROWS_AS(read_matrix_csv(ragged), InputError);
  std::stringstream bad("1,x,0\n");
  CHECK_THROWS_AS(read_matrix_csv(bad), InputError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_matrix_csv(empty), InputError);
  std::stringstream nonbinary("1,0.5\n");
  CHECK_THROWS_AS(read_spike_csv(nonbinary), InputError);
  std::stringstream noheader("0,1\n0.5,2\n");
  CHECK_THROWS_AS(read_psd_csv(noheader), InputError);
  std::stringstream wide("freq,power\n0,1,2\n");
  CHECK_THROWS_AS(read_psd_csv(wide), InputError);
}

TEST_CASE("JSON configs round trip and reject unknown keys") {
  EmConfig em;
  em.max_em_iters = 7;
  em.barrier_weight = 3e-4;
  nlohmann::json j = em;
  const EmConfig back = j.get<EmConfig>();
  CHECK(back.max_em_iters == 7);
  CHECK(back.barrier_weight == 3e-4);

  ExperimentConfig cfg;
  cfg.n_ar = 3;
  cfg.estimators = {"psth"};
  nlohmann::json k = cfg;
  const ExperimentConfig cfg2 = k.get<ExperimentConfig>();
  CHECK(cfg2.n_ar == 3);
  CHECK(cfg2.estimators == std::vector<std::string>{"psth"});
  CHECK(cfg2.ar_coeffs == cfg.ar_coeffs);

  CHECK_THROWS_AS(nlohmann::json({{"max_em_iter", 3}}).get<EmConfig>(), InputError);
  CHECK_THROWS_AS(nlohmann::json({{"em_iters", "many"}}).get<SsOptions>(), InputError);
  CHECK_THROWS_AS(nlohmann::json({{"seed", 1}, {"bogus", 2}}).get<ExperimentConfig>(), InputError);
}

}
