#pragma once

#include <json.hpp>

#include "pmtm/baselines.hpp"
#include "pmtm/em_estimator.hpp"
#include "pmtm/experiment.hpp"
#include "pmtm/pmtm.hpp"

namespace pmtm {

// Keys missing from the input keep their current (default) values; unknown
// keys are rejected with InputError.
void to_json(nlohmann::json& j, const EmConfig& cfg);
void from_json(const nlohmann::json& j, EmConfig& cfg);

void to_json(nlohmann::json& j, const SsOptions& opt);
void from_json(const nlohmann::json& j, SsOptions& opt);

void to_json(nlohmann::json& j, const ExperimentConfig& cfg);
void from_json(const nlohmann::json& j, ExperimentConfig& cfg);

void to_json(nlohmann::json& j, const EmIterationRecord& rec);
void to_json(nlohmann::json& j, const EmTrace& trace);

/// Run metadata: configuration echo, mean rate, scale factors and a short
/// convergence summary per taper (not the full traces).
nlohmann::json pmtm_metadata(const PmtmResult& result);

nlohmann::json summary_json(const ExperimentReport& report);

}  // namespace pmtm
