#include "braggsim/sweep_result.hpp"

#include "braggsim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace braggsim {

SweepResult::SweepResult(std::vector<std::string> column_names)
  : columns(std::move(column_names)), data(columns.size()) {}

void SweepResult::add_row(std::span<const double> values) {
  if (values.size() != columns.size()) throw InvalidArgument("row width does not match column count");
  for (std::size_t c = 0; c < values.size(); ++c) data[c].push_back(values[c]);
}

void SweepResult::add_row(std::initializer_list<double> values) {
  add_row(std::span<const double>(values.begin(), values.size()));
}

const std::vector<double>& SweepResult::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return data[c];
  throw InvalidArgument("no column named '" + name + "'");
}

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0; // drop negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

namespace {

std::string json_number(double v) {
  // JSON has no nan/inf
  if (!std::isfinite(v)) return "null";
  return format_value(v);
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    default: out += ch;
    }
  }
  return out + "\"";
}

} // namespace

std::string to_csv(const SweepResult& result) {
  std::ostringstream out;
  for (std::size_t c = 0; c < result.columns.size(); ++c) out << (c ? "," : "") << result.columns[c];
  out << '\n';
  for (std::size_t r = 0; r < result.rows(); ++r) {
    for (std::size_t c = 0; c < result.columns.size(); ++c)
      out << (c ? "," : "") << format_value(result.data[c][r]);
    out << '\n';
  }
  return out.str();
}

std::string to_json(const SweepResult& result) {
  std::ostringstream out;
  out << "{\n  \"columns\": [";
  for (std::size_t c = 0; c < result.columns.size(); ++c) out << (c ? ", " : "") << json_string(result.columns[c]);
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < result.rows(); ++r) {
    out << (r ? ",\n    {" : "\n    {");
    for (std::size_t c = 0; c < result.columns.size(); ++c)
      out << (c ? ", " : "") << json_string(result.columns[c]) << ": " << json_number(result.data[c][r]);
    out << "}";
  }
  out << (result.rows() ? "\n  ],\n" : "],\n");
  out << "  \"scalars\": {";
  bool first = true;
  for (const auto& [k, v] : result.scalars) {
    out << (first ? "" : ", ") << json_string(k) << ": " << json_number(v);
    first = false;
  }
  out << "},\n  \"notes\": [";
  for (std::size_t i = 0; i < result.notes.size(); ++i) out << (i ? ", " : "") << json_string(result.notes[i]);
  out << "]\n}\n";
  return out.str();
}

} // namespace braggsim
