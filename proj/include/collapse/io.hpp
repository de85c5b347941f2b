#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "collapse/units.hpp"

namespace collapse {

// Parameter file: {"lambda0", "inv_sqrt_alpha", "hubble", "species": [...]}.
// Unknown keys anywhere in the document are rejected.
struct RunParams {
  CslParams csl;
  CosmologyParams cosmology;
  std::vector<ParticleSpecies> species;
};

RunParams load_params(const std::string& path);

// CSV emitter. Every file starts with a '#' comment recording the argv and
// seed that produced it, followed by the header line; numeric cells are
// printed with %.17g so files round-trip doubles exactly.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& provenance,
            const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row(const std::string& label, const std::vector<double>& values);

  static std::string format(double value);

 private:
  std::ofstream out_;
  std::size_t n_columns_;
};

// Reads one numeric column from a CSV produced by this tool (or any file of
// plain numbers). '#' comments are skipped; with a header present the named
// column is selected, otherwise column_name is ignored and the last column
// is used.
std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column_name);

// Reads several named columns at once; the file must carry a header row and
// every requested name must appear in it.
std::vector<std::vector<double>> read_csv_columns(
    const std::string& path, const std::vector<std::string>& column_names);

std::string join_argv(int argc, const char* const* argv);

}  // namespace collapse
