#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace braggsim {

// A table of observables against a swept parameter. Values are stored
// column-major; `scalars` carries derived figures (fit slopes, etc.).
struct SweepResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;
  std::map<std::string, double> scalars;
  std::vector<std::string> notes;

  SweepResult() = default;
  explicit SweepResult(std::vector<std::string> column_names);

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  void add_row(std::span<const double> values);
  void add_row(std::initializer_list<double> values);
  const std::vector<double>& column(const std::string& name) const;
};

// Fixed scientific notation with 9 significant digits.
std::string format_value(double v);

// Header row of column names, then one line per row.
std::string to_csv(const SweepResult& result);

// {"columns": [...], "rows": [{name: value, ...}, ...], "scalars": {...}}
std::string to_json(const SweepResult& result);

} // namespace braggsim
