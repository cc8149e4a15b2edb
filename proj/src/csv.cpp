#include "fracsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracsim {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_column(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != columns.front().size()) {
    throw std::invalid_argument("CSV column length mismatch for " + name);
  }
  header.push_back(std::move(name));
  columns.push_back(std::move(values));
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c) {
    os << (c ? "," : "") << header[c];
  }
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << (c ? "," : "") << format_double(columns[c][r]);
    }
    os << '\n';
  }
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << to_string();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty CSV " + path.string());
  std::stringstream hs(line);
  std::string field;
  while (std::getline(hs, field, ',')) {
    t.header.push_back(field);
    t.columns.emplace_back();
  }
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, field, ',')) {
      if (c >= t.columns.size()) throw std::runtime_error("ragged CSV row in " + path.string());
      t.columns[c++].push_back(std::stod(field));
    }
    if (c != t.columns.size()) throw std::runtime_error("ragged CSV row in " + path.string());
  }
  return t;
}

}  // namespace fracsim
