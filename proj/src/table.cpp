#include "trgg/table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "trgg/errors.hpp"

namespace trgg {

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("result table: row width does not match columns");
  rows.push_back(std::move(row));
}

TableFormat parse_table_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw ConfigError("format: expected 'csv' or 'json', got '" + name + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

namespace {

std::string csv_quote(const std::string& field) {
  const bool needs_quote = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_to_csv(const ResultTable::Cell& cell) {
  if (std::holds_alternative<std::int64_t>(cell))
    return std::to_string(std::get<std::int64_t>(cell));
  if (std::holds_alternative<double>(cell)) return format_double(std::get<double>(cell));
  return csv_quote(std::get<std::string>(cell));
}

nlohmann::json cell_to_json(const ResultTable::Cell& cell) {
  if (std::holds_alternative<std::int64_t>(cell)) return std::get<std::int64_t>(cell);
  if (std::holds_alternative<double>(cell)) {
    const double v = std::get<double>(cell);
    // JSON has no literal for non-finite numbers; keep them textual.
    if (!std::isfinite(v)) return format_double(v);
    return v;
  }
  return std::get<std::string>(cell);
}

}  // namespace

std::string emit_csv(const ResultTable& table) {
  std::string out;
  // Metadata as leading comments, one top-level key each, canonical order.
  for (auto it = table.metadata.begin(); it != table.metadata.end(); ++it) {
    out += "# ";
    out += it.key();
    out += ": ";
    out += it.value().dump();
    out += '\n';
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_quote(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += cell_to_csv(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string emit_json(const ResultTable& table) {
  nlohmann::json j;
  j["metadata"] = table.metadata;
  j["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) r.push_back(cell_to_json(cell));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

std::string emit_results(const ResultTable& table, TableFormat format) {
  return format == TableFormat::csv ? emit_csv(table) : emit_json(table);
}

ResultTable table_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ResultTable table;
  table.metadata = j.at("metadata");
  table.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    std::vector<ResultTable::Cell> cells;
    cells.reserve(row.size());
    for (const auto& cell : row) {
      if (cell.is_number_integer())
        cells.emplace_back(cell.get<std::int64_t>());
      else if (cell.is_number_float())
        cells.emplace_back(cell.get<double>());
      else
        cells.emplace_back(cell.get<std::string>());
    }
    table.add_row(std::move(cells));
  }
  return table;
}

}  // namespace trgg
