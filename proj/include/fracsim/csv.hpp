#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fracsim {

/// Column-oriented CSV table, one header line, '.' decimal, full double
/// precision so downstream error norms round-trip losslessly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  void add_column(std::string name, std::vector<double> values);
  void write(const std::filesystem::path& path) const;
  [[nodiscard]] std::string to_string() const;
};

/// Reads a numeric CSV written by CsvTable (or compatible).
CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace fracsim
