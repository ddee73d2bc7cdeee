#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace trgg {

// Rectangular result table with a metadata block. Emission is byte
// deterministic: fixed column order, canonical metadata key order, and
// shortest round-trip number formatting.
struct ResultTable {
  std::vector<std::string> columns;
  using Cell = std::variant<std::int64_t, double, std::string>;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json metadata;  // config echo, artifact version, seed

  void add_row(std::vector<Cell> row);
};

enum class TableFormat { csv, json };

TableFormat parse_table_format(const std::string& name);

// Shortest representation that round-trips; "inf"/"-inf"/"nan" for
// non-finite values.
std::string format_double(double value);

// CSV with '#'-prefixed metadata comment lines, a header row, RFC-style
// quoting and '\n' line endings.
std::string emit_csv(const ResultTable& table);
// JSON object {"metadata":..., "columns":..., "rows":...}.
std::string emit_json(const ResultTable& table);

std::string emit_results(const ResultTable& table, TableFormat format);

// Inverse of emit_json; cell types are preserved.
ResultTable table_from_json(const std::string& text);

}  // namespace trgg
