#include "dersamp/cli/table.hpp"

#include "dersamp/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace dersamp::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw LengthMismatch("table row has " + std::to_string(row.size()) + " cells, expected " +
                         std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_real(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json cell_json(const Cell& c) {
  if (std::holds_alternative<long>(c))
    return std::get<long>(c);
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (std::isfinite(v))
      return v;
    return format_real(v);
  }
  if (std::holds_alternative<std::string>(c))
    return std::get<std::string>(c);
  return nullptr;
}

} // namespace

std::string format_cell(const Cell& c) {
  if (std::holds_alternative<long>(c))
    return std::to_string(std::get<long>(c));
  if (std::holds_alternative<double>(c))
    return format_real(std::get<double>(c));
  if (std::holds_alternative<std::string>(c))
    return quote_csv(std::get<std::string>(c));
  return "";
}

void write_csv(std::ostream& os, const Table& t, const std::string& config_line) {
  os << "# config: " << config_line << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << quote_csv(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
  for (const auto& [key, value] : t.summary)
    os << "# summary: " << key << '=' << format_cell(value) << '\n';
  for (const auto& w : t.warnings)
    os << "# warning: " << w << '\n';
}

nlohmann::json table_to_json(const Table& t, const nlohmann::json& config) {
  nlohmann::json j;
  j["config"] = config;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row)
      r.push_back(cell_json(c));
    j["rows"].push_back(std::move(r));
  }
  j["summary"] = nlohmann::json::object();
  for (const auto& [key, value] : t.summary)
    j["summary"][key] = cell_json(value);
  j["warnings"] = t.warnings;
  return j;
}

} // namespace dersamp::cli
