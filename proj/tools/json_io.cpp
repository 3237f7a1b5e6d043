#include "json_io.hpp"

#include <set>
#include <string>

#include "pmtm/errors.hpp"
#include "pmtm/metrics.hpp"

namespace pmtm {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw InputError(std::string("unknown ") + what + " key '" + key + "'");
  }
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

void to_json(nlohmann::json& j, const EmConfig& c) {
  j = {{"max_em_iters", c.max_em_iters},       {"em_tol", c.em_tol},
       {"max_newton_iters", c.max_newton_iters}, {"newton_grad_tol", c.newton_grad_tol},
       {"armijo_c", c.armijo_c},               {"backtrack_ratio", c.backtrack_ratio},
       {"boundary_margin", c.boundary_margin}, {"barrier_weight", c.barrier_weight},
       {"initial_theta", c.initial_theta}};
}

void from_json(const nlohmann::json& j, EmConfig& c) {
  reject_unknown(j,
                 {"max_em_iters", "em_tol", "max_newton_iters", "newton_grad_tol", "armijo_c",
                  "backtrack_ratio", "boundary_margin", "barrier_weight", "initial_theta"},
                 "EM config");
  read_opt(j, "max_em_iters", c.max_em_iters);
  read_opt(j, "em_tol", c.em_tol);
  read_opt(j, "max_newton_iters", c.max_newton_iters);
  read_opt(j, "newton_grad_tol", c.newton_grad_tol);
  read_opt(j, "armijo_c", c.armijo_c);
  read_opt(j, "backtrack_ratio", c.backtrack_ratio);
  read_opt(j, "boundary_margin", c.boundary_margin);
  read_opt(j, "barrier_weight", c.barrier_weight);
  read_opt(j, "initial_theta", c.initial_theta);
}

void to_json(nlohmann::json& j, const SsOptions& o) {
  j = {{"em_iters", o.em_iters},
       {"em_tol", o.em_tol},
       {"initial_noise_var", o.initial_noise_var},
       {"initial_state_var", o.initial_state_var},
       {"rate_margin", o.rate_margin}};
}

void from_json(const nlohmann::json& j, SsOptions& o) {
  reject_unknown(j, {"em_iters", "em_tol", "initial_noise_var", "initial_state_var", "rate_margin"},
                 "state-space config");
  read_opt(j, "em_iters", o.em_iters);
  read_opt(j, "em_tol", o.em_tol);
  read_opt(j, "initial_noise_var", o.initial_noise_var);
  read_opt(j, "initial_state_var", o.initial_state_var);
  read_opt(j, "rate_margin", o.rate_margin);
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = {{"ar_coeffs", c.ar_coeffs}, {"noise_std", c.noise_std}, {"mean_rate", c.mean_rate},
       {"bins", c.bins},           {"trials", c.trials},       {"alpha", c.alpha},
       {"tapers", c.tapers},       {"freq_bins", c.freq_bins}, {"em", c.em},
       {"ss", c.ss},               {"n_ar", c.n_ar},           {"n_ensembles", c.n_ensembles},
       {"seed", c.seed},           {"estimators", c.estimators}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  reject_unknown(j,
                 {"ar_coeffs", "noise_std", "mean_rate", "bins", "trials", "alpha", "tapers",
                  "freq_bins", "em", "ss", "n_ar", "n_ensembles", "seed", "estimators"},
                 "experiment config");
  read_opt(j, "ar_coeffs", c.ar_coeffs);
  read_opt(j, "noise_std", c.noise_std);
  read_opt(j, "mean_rate", c.mean_rate);
  read_opt(j, "bins", c.bins);
  read_opt(j, "trials", c.trials);
  read_opt(j, "alpha", c.alpha);
  read_opt(j, "tapers", c.tapers);
  read_opt(j, "freq_bins", c.freq_bins);
  if (j.contains("em")) from_json(j.at("em"), c.em);
  if (j.contains("ss")) from_json(j.at("ss"), c.ss);
  read_opt(j, "n_ar", c.n_ar);
  read_opt(j, "n_ensembles", c.n_ensembles);
  read_opt(j, "seed", c.seed);
  read_opt(j, "estimators", c.estimators);
}

void to_json(nlohmann::json& j, const EmIterationRecord& r) {
  j = {{"log_likelihood", r.log_likelihood},
       {"theta_rel_change", r.theta_rel_change},
       {"newton_iterations", r.newton_iterations},
       {"newton_converged", r.newton_converged},
       {"active_constraints", r.active_constraints},
       {"jitter_events", r.jitter_events},
       {"newton_objectives", r.newton_objectives}};
}

void to_json(nlohmann::json& j, const EmTrace& t) {
  j = {{"converged", t.converged}, {"clamped_offsets", t.clamped_offsets}, {"iterations", t.iterations}};
}

nlohmann::json pmtm_metadata(const PmtmResult& r) {
  nlohmann::json tapers = nlohmann::json::array();
  for (std::size_t j = 0; j < r.traces.size(); ++j) {
    const auto& t = r.traces[j];
    tapers.push_back({{"index", j},
                      {"scale", r.taper_scales[j]},
                      {"em_iterations", t.iterations.size()},
                      {"converged", t.converged},
                      {"final_theta_rel_change",
                       t.iterations.empty() ? 0.0 : t.iterations.back().theta_rel_change},
                      {"clamped_offsets", t.clamped_offsets}});
  }
  return {{"estimator", "pmtm"},
          {"alpha", r.alpha},
          {"tapers", r.tapers},
          {"freq_bins", r.freq_bins},
          {"em", r.em},
          {"mean_rate", r.mean_rate},
          {"mean_rate_note", "tapered offsets use the plug-in mean-rate estimate"},
          {"spectral_scale", r.spectral_scale},
          {"spectral_scale_note",
           "eigen-spectra are variance readouts times taper_scale^2 times 2K/N; 2K/N matches the "
           "expected energy of x = A z to the Parseval integral of the classic eigen-spectrum"},
          {"per_taper", tapers}};
}

nlohmann::json summary_json(const ExperimentReport& report) {
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& [name, s] : report.summary) {
    summary[name] = {{"mean", s.mean}, {"std", s.std_dev}, {"two_std", 2.0 * s.std_dev}, {"runs", s.runs}};
  }
  return {{"metric", kNormalizedMseFormula},
          {"config", report.config},
          {"failed_runs", report.failed_runs},
          {"total_runs", report.runs.size()},
          {"summary", summary}};
}

}  // namespace pmtm
