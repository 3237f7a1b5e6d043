#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "pmtm/psd.hpp"
#include "pmtm/simulate.hpp"

namespace pmtm {

/// Header-free CSV: one row per trial, comma-separated 0/1 entries.
SpikeEnsemble read_spike_csv(std::istream& in);
SpikeEnsemble read_spike_csv(const std::filesystem::path& path);
void write_spike_csv(std::ostream& out, const SpikeEnsemble& spikes);

/// Header-free numeric matrix, full round-trip precision.
Eigen::MatrixXd read_matrix_csv(std::istream& in);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

/// `freq,power` header followed by rows in increasing frequency.
void write_psd_csv(std::ostream& out, const PsdEstimate& psd);
PsdEstimate read_psd_csv(std::istream& in);

}  // namespace pmtm
