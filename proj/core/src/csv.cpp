#include "pmtm/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pmtm/errors.hpp"

namespace pmtm {

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::size_t b = pos;
    std::size_t e = end;
    while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
    while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data() + b, line.data() + e, v);
    if (b == e || ec != std::errc() || ptr != line.data() + e) {
      throw InputError("CSV line " + std::to_string(line_no) + ": malformed number '" +
                       line.substr(b, e - b) + "'");
    }
    row.push_back(v);
    pos = end + 1;
  }
  return row;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    rows.push_back(parse_row(line, line_no));
    if (rows.back().size() != rows.front().size()) {
      throw InputError("CSV line " + std::to_string(line_no) + ": ragged row");
    }
  }
  if (rows.empty()) throw InputError("CSV input is empty");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  std::ostringstream buf;
  buf.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) buf << ',';
      buf << m(i, j);
    }
    buf << '\n';
  }
  out << buf.str();
}

SpikeEnsemble read_spike_csv(std::istream& in) { return SpikeEnsemble(read_matrix_csv(in)); }

SpikeEnsemble read_spike_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spike file " + path.string());
  return read_spike_csv(in);
}

void write_spike_csv(std::ostream& out, const SpikeEnsemble& spikes) {
  const auto& n = spikes.trials();
  std::string row;
  for (Eigen::Index l = 0; l < n.rows(); ++l) {
    row.clear();
    for (Eigen::Index k = 0; k < n.cols(); ++k) {
      if (k > 0) row += ',';
      row += n(l, k) != 0.0 ? '1' : '0';
    }
    out << row << '\n';
  }
}

void write_psd_csv(std::ostream& out, const PsdEstimate& psd) {
  validate(psd);
  std::ostringstream buf;
  buf.precision(17);
  buf << "freq,power\n";
  for (std::size_t i = 0; i < psd.freqs.size(); ++i) buf << psd.freqs[i] << ',' << psd.power[i] << '\n';
  out << buf.str();
}

PsdEstimate read_psd_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line)) break;
  }
  if (line.rfind("freq,power", 0) != 0) throw InputError("PSD CSV must start with a 'freq,power' header");
  PsdEstimate psd;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto row = parse_row(line, line_no);
    if (row.size() != 2) throw InputError("PSD CSV line " + std::to_string(line_no) + ": expected 2 columns");
    psd.freqs.push_back(row[0]);
    psd.power.push_back(row[1]);
  }
  validate(psd);
  return psd;
}

}  // namespace pmtm
