#include "collapse/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace collapse {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj,
                         const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument("unknown key \"" + item.key() + "\" in " +
                                  where);
  }
}

}  // namespace

RunParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open params file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw std::invalid_argument("params file " + path + ": " + err.what());
  }
  if (!doc.is_object())
    throw std::invalid_argument("params file must hold a JSON object");
  reject_unknown_keys(doc, {"lambda0", "inv_sqrt_alpha", "hubble", "species"},
                      "params file");
  if (!doc.contains("lambda0") || !doc.contains("inv_sqrt_alpha"))
    throw std::invalid_argument(
        "params file needs \"lambda0\" and \"inv_sqrt_alpha\"");

  RunParams params;
  params.csl.lambda0 = doc.at("lambda0").get<double>();
  const double inv_sqrt_alpha = doc.at("inv_sqrt_alpha").get<double>();
  if (!(inv_sqrt_alpha > 0.0))
    throw std::invalid_argument("inv_sqrt_alpha must be positive");
  params.csl.alpha_csl = 1.0 / (inv_sqrt_alpha * inv_sqrt_alpha);
  params.cosmology.hubble = doc.value("hubble", 0.0);
  if (doc.contains("species")) {
    const json& list = doc.at("species");
    if (!list.is_array())
      throw std::invalid_argument("\"species\" must be an array");
    for (const json& entry : list) {
      reject_unknown_keys(entry, {"name", "mass_kg"}, "species entry");
      ParticleSpecies sp;
      sp.name = entry.at("name").get<std::string>();
      sp.mass_kg = entry.at("mass_kg").get<double>();
      if (!(sp.mass_kg > 0.0))
        throw std::invalid_argument("species \"" + sp.name +
                                    "\": mass_kg must be positive");
      params.species.push_back(std::move(sp));
    }
  }
  params.csl.validate();
  params.cosmology.validate();
  return params;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& provenance,
                     const std::vector<std::string>& header)
    : out_(path), n_columns_(header.size()) {
  if (!out_) throw std::invalid_argument("cannot open output file: " + path);
  if (header.empty())
    throw std::invalid_argument("CsvWriter: header must be nonempty");
  out_ << "# " << provenance << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

std::string CsvWriter::format(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_)
    throw std::invalid_argument("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row(const std::string& label,
                    const std::vector<double>& values) {
  if (values.size() + 1 != n_columns_)
    throw std::invalid_argument("CsvWriter: row width mismatch");
  out_ << label;
  for (const double v : values) out_ << ',' << format(v);
  out_ << '\n';
}

std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column_name) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open samples file: " + path);

  std::vector<double> values;
  std::ptrdiff_t column = -1;
  bool header_checked = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.empty()) continue;

    if (!header_checked) {
      header_checked = true;
      bool numeric = true;
      try {
        std::size_t pos = 0;
        (void)std::stod(cells[0], &pos);
        numeric = pos == cells[0].size();
      } catch (...) {
        numeric = false;
      }
      if (!numeric) {
        for (std::size_t i = 0; i < cells.size(); ++i)
          if (cells[i] == column_name) column = static_cast<std::ptrdiff_t>(i);
        if (column < 0)
          column = static_cast<std::ptrdiff_t>(cells.size()) - 1;
        continue;
      }
      column = static_cast<std::ptrdiff_t>(cells.size()) - 1;
    }

    const auto idx = static_cast<std::size_t>(column);
    if (idx >= cells.size())
      throw std::invalid_argument("samples file: short row in " + path);
    values.push_back(std::stod(cells[idx]));
  }
  if (values.empty())
    throw std::invalid_argument("samples file holds no data rows: " + path);
  return values;
}

std::vector<std::vector<double>> read_csv_columns(
    const std::string& path, const std::vector<std::string>& column_names) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open samples file: " + path);

  std::vector<std::ptrdiff_t> indices(column_names.size(), -1);
  std::vector<std::vector<double>> columns(column_names.size());
  bool header_seen = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.empty()) continue;

    if (!header_seen) {
      header_seen = true;
      for (std::size_t j = 0; j < column_names.size(); ++j) {
        for (std::size_t i = 0; i < cells.size(); ++i)
          if (cells[i] == column_names[j])
            indices[j] = static_cast<std::ptrdiff_t>(i);
        if (indices[j] < 0)
          throw std::invalid_argument("file " + path + " lacks column \"" +
                                      column_names[j] + "\"");
      }
      continue;
    }

    for (std::size_t j = 0; j < column_names.size(); ++j) {
      const auto idx = static_cast<std::size_t>(indices[j]);
      if (idx >= cells.size())
        throw std::invalid_argument("samples file: short row in " + path);
      columns[j].push_back(std::stod(cells[idx]));
    }
  }
  if (!header_seen || columns.empty() || columns[0].empty())
    throw std::invalid_argument("samples file holds no data rows: " + path);
  return columns;
}

std::string join_argv(int argc, const char* const* argv) {
  std::string joined;
  for (int i = 0; i < argc; ++i) {
    if (i) joined += ' ';
    joined += argv[i];
  }
  return joined;
}

}  // namespace collapse
