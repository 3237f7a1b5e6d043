#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "json_io.hpp"
#include "pmtm/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pmtm_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::vector<std::string>& args) {
  return pmtm::cli::run(args);
}

nlohmann::json read_json(const std::string& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate, estimate and evaluate end to end") {
  TempDir dir;
  const auto spikes = dir.file("spikes.csv");
  REQUIRE(run({"simulate", "--bins", "64", "--trials", "4", "--seed", "3", "--out", spikes}) == 0);
  const auto ens = pmtm::read_spike_csv(fs::path(spikes));
  CHECK(ens.trial_count() == 4);
  CHECK(ens.bin_count() == 64);
  const auto meta = read_json(spikes + ".json");
  CHECK(meta.at("seed") == 3);
  CHECK(meta.at("trials") == 4);

  // Same seed, same file.
  const auto again = dir.file("again.csv");
  REQUIRE(run({"simulate", "--bins", "64", "--trials", "4", "--seed", "3", "--out", again}) == 0);
  CHECK(pmtm::read_spike_csv(fs::path(again)).trials() == ens.trials());

  const auto est = dir.file("pmtm.csv");
  REQUIRE(run({"pmtm", "--spikes", spikes, "--alpha", "2", "--tapers", "3", "--max-em-iters", "5", "--out", est,
               "--dump-traces", dir.file("traces.json")}) == 0);
  CHECK(read_json(est + ".json").at("tapers") == 3);
  CHECK(read_json(dir.file("traces.json")).size() == 3);
  std::ifstream in(est);
  CHECK(pmtm::read_psd_csv(in).size() == 32);

  const auto psth = dir.file("psth.csv");
  CHECK(run({"baseline", "--method", "psth", "--spikes", spikes, "--alpha", "2", "--tapers", "3", "--out", psth}) ==
        0);
  const auto score = dir.file("score.json");
  REQUIRE(run({"evaluate", "--estimate", psth, "--out", score}) == 0);
  CHECK(read_json(score).at("normalized_mse").get<double>() > 0.0);

  const auto taper_file = dir.file("tapers.csv");
  REQUIRE(run({"dpss", "--bins", "32", "--alpha", "2", "--tapers", "3", "--out", taper_file}) == 0);
  std::ifstream tin(taper_file);
  CHECK(pmtm::read_matrix_csv(tin).rows() == 3);
}

TEST_CASE("small experiment writes runs and summary") {
  TempDir dir;
  const auto cfg = dir.file("cfg.json");
  std::ofstream(cfg) << R"({"bins": 64, "alpha": 2.0, "tapers": 3, "em": {"max_em_iters": 4}})";
  const auto runs = dir.file("runs.csv");
  const auto summary = dir.file("summary.json");
  REQUIRE(run({"experiment", "--config", cfg, "--n-ar", "1", "--n-ensembles", "2", "--estimators", "psth", "oracle",
               "--out-runs", runs, "--out-summary", summary, "--quiet"}) == 0);
  std::ifstream in(runs);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 1 + 4);  // metric comment, header, 2 runs x 2 estimators
  CHECK(read_json(summary).dump().find("psth") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run({"--help"}) == 0);
  CHECK(run({"dpss", "--bins", "0", "--out", dir.file("t.csv")}) == 1);
  CHECK(run({"nonsense"}) == 1);
  CHECK(run({"pmtm", "--spikes", dir.file("missing.csv"), "--out", dir.file("o.csv")}) == 1);
  const auto cfg = dir.file("bad.json");
  std::ofstream(cfg) << R"({"n_ar": 1, "typo": 2})";
  CHECK(run({"experiment", "--config", cfg, "--quiet"}) == 1);
  const auto broken = dir.file("broken.json");
  std::ofstream(broken) << "{ not json";
  CHECK(run({"experiment", "--config", broken, "--quiet"}) == 1);
}

}
