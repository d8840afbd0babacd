#include "bounds/trajectory/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace bounds::trajectory {
namespace {

constexpr std::string_view kMeasurementPrefix = "y_";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string row_tag(std::size_t row, std::size_t line) {
  return "row " + std::to_string(row) + " (line " + std::to_string(line) + ")";
}

struct Comments {
  std::optional<double> dt;
  std::optional<Provenance> provenance;
};

void parse_comment(const std::string& line, Comments& c) {
  std::istringstream in(line.substr(1));
  std::string token;
  Provenance prov;
  bool has_prov = false;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    if (key == "dt") {
      char* end = nullptr;
      const double dt = std::strtod(value.c_str(), &end);
      if (end == value.c_str() || !(dt > 0.0)) throw InputError("invalid dt comment '" + value + "'");
      c.dt = dt;
    } else if (key == "provenance") {
      has_prov = true;
      if (value == "simulated") {
        prov.kind = Provenance::Kind::simulated;
      } else if (value == "measured") {
        prov.kind = Provenance::Kind::measured;
      } else {
        throw InputError("unknown provenance '" + value + "'");
      }
    } else if (key == "seed") {
      prov.seed = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "source") {
      prov.source_id = value;
    }
  }
  if (has_prov) c.provenance = prov;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvSchema schema_for(const Trajectory& traj) {
  CsvSchema s;
  s.states = traj.state_labels();
  s.inputs = traj.input_labels();
  s.measurements = traj.measurement_labels();
  return s;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  out << "# bounds " << kVersion << "\n";
  out << "# dt=" << format_double(traj.dt()) << "\n";
  const auto& prov = traj.provenance();
  if (prov.kind == Provenance::Kind::simulated) {
    out << "# provenance=simulated seed=" << prov.seed << "\n";
  } else {
    out << "# provenance=measured source=" << (prov.source_id.empty() ? "unknown" : prov.source_id)
        << "\n";
  }
  out << "t";
  for (const auto& l : traj.state_labels()) out << ',' << l.name;
  for (const auto& l : traj.input_labels()) out << ',' << l.name;
  for (const auto& l : traj.measurement_labels()) out << ',' << kMeasurementPrefix << l.name;
  out << "\n";
  for (Eigen::Index k = 0; k < traj.length(); ++k) {
    out << format_double(traj.time(k));
    for (const Matrix* block : {&traj.states(), &traj.inputs(), &traj.measurements()}) {
      for (Eigen::Index j = 0; j < block->cols(); ++j) out << ',' << format_double((*block)(k, j));
    }
    out << "\n";
  }
}

void export_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_csv(traj, out);
  if (!out) throw InputError("failed writing '" + path + "'");
}

Trajectory ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv(in, schema, path);
}

Trajectory parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source_id) {
  Comments comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') {
      parse_comment(line.substr(line.find('#')), comments);
      continue;
    }
    auto cells = split(line, ',');
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    const std::size_t row = rows.size();
    if (cells.size() != header.size()) {
      throw InputError(row_tag(row, line_no) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(cells.size()));
    }
    std::vector<double> values(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const char* begin = cells[j].c_str();
      char* end = nullptr;
      values[j] = std::strtod(begin, &end);
      if (end == begin || *end != '\0') {
        throw InputError(row_tag(row, line_no) + ": column '" + header[j] +
                         "' is not a number ('" + cells[j] + "')");
      }
      if (!std::isfinite(values[j])) {
        throw InputError(row_tag(row, line_no) + ": column '" + header[j] + "' is not finite");
      }
    }
    rows.push_back(std::move(values));
    row_lines.push_back(line_no);
  }
  if (header.empty()) throw InputError("CSV '" + source_id + "' has no header row");
  if (header.front() != "t") throw InputError("CSV first column must be 't'");
  if (rows.empty()) throw InputError("CSV '" + source_id + "' has no data rows");

  Provenance prov;
  if (comments.provenance) {
    prov = *comments.provenance;
  } else {
    prov.kind = Provenance::Kind::measured;
  }
  if (prov.kind == Provenance::Kind::measured && prov.source_id.empty()) prov.source_id = source_id;
  const bool measured = prov.kind == Provenance::Kind::measured;

  std::vector<bool> used(header.size(), false);
  used[0] = true;
  auto column_index = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t j = 1; j < header.size(); ++j) {
      if (header[j] == name) return j;
    }
    return std::nullopt;
  };
  const auto K = static_cast<Eigen::Index>(rows.size());
  auto gather = [&](const LabelList& labels, std::string_view prefix, bool optional,
                    LabelList& present, Matrix& values) {
    std::vector<std::size_t> cols;
    for (const auto& l : labels) {
      const std::string name = std::string(prefix) + l.name;
      const auto j = column_index(name);
      if (!j) {
        if (optional) continue;
        throw InputError("CSV '" + source_id + "' is missing column '" + name + "'");
      }
      used[*j] = true;
      present.push_back(l);
      cols.push_back(*j);
    }
    values.resize(K, static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index k = 0; k < K; ++k) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        values(k, static_cast<Eigen::Index>(c)) = rows[static_cast<std::size_t>(k)][cols[c]];
      }
    }
  };
  LabelList state_labels, input_labels, measurement_labels;
  Matrix states, inputs, measurements;
  gather(schema.states, "", measured, state_labels, states);
  gather(schema.inputs, "", measured, input_labels, inputs);
  gather(schema.measurements, kMeasurementPrefix, measured, measurement_labels, measurements);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!used[j]) throw InputError("CSV '" + source_id + "' has unexpected column '" + header[j] + "'");
  }
  if (states.cols() + inputs.cols() + measurements.cols() == 0) {
    throw InputError("CSV '" + source_id + "' has no columns from the schema");
  }

  for (const auto& [name, factor] : schema.scales) {
    if (auto i = find_label(measurement_labels, name)) {
      measurements.col(static_cast<Eigen::Index>(*i)) *= factor;
    } else {
      throw InputError("scale given for column '" + name + "' which is not an ingested measurement");
    }
  }

  double dt = 0.0;
  if (comments.dt) {
    dt = *comments.dt;
  } else if (rows.size() >= 2) {
    std::vector<double> steps;
    for (std::size_t k = 1; k < rows.size(); ++k) steps.push_back(rows[k][0] - rows[k - 1][0]);
    std::nth_element(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2),
                     steps.end());
    dt = steps[steps.size() / 2];
  } else {
    throw InputError("CSV '" + source_id + "' has one row and no dt comment");
  }
  if (!(dt > 0.0)) throw InputError("CSV '" + source_id + "' timestamps are not increasing");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double step = rows[k][0] - rows[k - 1][0];
    if (std::abs(step - dt) > schema.jitter_tolerance * dt) {
      throw InputError(row_tag(k, row_lines[k]) + ": timestamp step " + format_double(step) +
                       " s deviates from dt = " + format_double(dt) + " s (non-uniform sampling)");
    }
  }

  return Trajectory(dt, rows.front()[0], std::move(state_labels), std::move(states),
                    std::move(input_labels), std::move(inputs), std::move(measurement_labels),
                    std::move(measurements), prov);
}

}  // namespace bounds::trajectory
