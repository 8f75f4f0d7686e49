#pragma once

// Tabular command output with CSV and JSON writers.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dersamp::cli {

/// Empty, integer, real or text.
using Cell = std::variant<std::monostate, long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Scalar results reported after the rows.
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> warnings;

  void add_row(std::vector<Cell> row);
};

/// Reals with 17 significant digits; inf/nan spelled out.
std::string format_real(double v);
std::string format_cell(const Cell& c);

/// `# config: <json>`, header, rows, then `# summary:` and `# warning:` lines.
void write_csv(std::ostream& os, const Table& t, const std::string& config_line);

/// {"config", "columns", "rows", "summary", "warnings"}. Non-finite reals
/// become strings so the document stays valid JSON.
nlohmann::json table_to_json(const Table& t, const nlohmann::json& config);

} // namespace dersamp::cli
