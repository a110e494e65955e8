#include "core/table.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace kerrpol {

namespace {

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_shape(const Table& table) {
  if (table.rows.size() != table.row_status.size()) {
    throw InvariantError("table has " + std::to_string(table.rows.size()) + " rows but " +
                         std::to_string(table.row_status.size()) + " status entries");
  }
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw InvariantError("table row width " + std::to_string(row.size()) +
                           " does not match " + std::to_string(table.columns.size()) +
                           " columns");
    }
  }
}

std::string emit_csv(const Table& table) {
  std::string out;
  for (const auto& c : table.columns) {
    out += c;
    out += ',';
  }
  out += "status\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (double v : table.rows[i]) {
      out += format_cell(v);
      out += ',';
    }
    out += table.row_status[i];
    out += '\n';
  }
  return out;
}

std::string emit_json(const Table& table, bool fixed_metadata) {
  nlohmann::ordered_json meta;
  for (const auto& [k, v] : table.info) {
    meta[k] = (fixed_metadata && k == "generated") ? "fixed" : v;
  }
  if (fixed_metadata && !meta.contains("generated")) {
    meta["generated"] = "fixed";
  }
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.params) params[k] = v;
  meta["params"] = std::move(params);
  nlohmann::ordered_json schema = nlohmann::ordered_json::array();
  for (const auto& c : table.columns) schema.push_back(c);
  schema.push_back("status");
  meta["schema"] = std::move(schema);

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (double v : table.rows[i]) {
      if (std::isnan(v)) {
        row.push_back(nullptr);
      } else {
        row.push_back(v);
      }
    }
    row.push_back(table.row_status[i]);
    rows.push_back(std::move(row));
  }

  nlohmann::ordered_json doc;
  doc["metadata"] = std::move(meta);
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace

TableFormat table_format_from_name(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw RangeError("unknown table format '" + name + "' (expected csv or json)");
}

std::string emit_table(const Table& table, TableFormat format, bool fixed_metadata) {
  check_shape(table);
  return format == TableFormat::csv ? emit_csv(table) : emit_json(table, fixed_metadata);
}

void emit_table_file(const Table& table, const std::string& path, TableFormat format,
                     bool fixed_metadata) {
  const std::string body = emit_table(table, format, fixed_metadata);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

Table parse_table_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("table JSON is malformed: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("metadata") || !doc.contains("rows")) {
    throw SchemaError("table JSON must be an object with 'metadata' and 'rows'");
  }
  const auto& meta = doc["metadata"];
  if (!meta.is_object() || !meta.contains("schema") || !meta["schema"].is_array()) {
    throw SchemaError("table metadata must carry a 'schema' array");
  }

  Table table;
  for (const auto& [k, v] : meta.items()) {
    if (k == "schema") continue;
    if (k == "params") {
      if (!v.is_object()) throw SchemaError("metadata 'params' must be an object");
      for (const auto& [pk, pv] : v.items()) {
        if (!pv.is_number()) throw SchemaError("metadata param '" + pk + "' must be numeric");
        table.params[pk] = pv.get<double>();
      }
      continue;
    }
    if (!v.is_string()) throw SchemaError("metadata field '" + k + "' must be a string");
    table.info[k] = v.get<std::string>();
  }

  const auto& schema = meta["schema"];
  if (schema.empty() || schema.back() != "status") {
    throw SchemaError("table schema must end with 'status'");
  }
  for (std::size_t i = 0; i + 1 < schema.size(); ++i) {
    if (!schema[i].is_string()) throw SchemaError("schema entries must be strings");
    table.columns.push_back(schema[i].get<std::string>());
  }

  for (const auto& row : doc["rows"]) {
    if (!row.is_array() || row.size() != schema.size()) {
      throw SchemaError("each row must match the schema width");
    }
    std::vector<double> cells;
    cells.reserve(table.columns.size());
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
      if (row[i].is_null()) {
        cells.push_back(std::nan(""));
      } else if (row[i].is_number()) {
        cells.push_back(row[i].get<double>());
      } else {
        throw SchemaError("row cells must be numbers or null");
      }
    }
    if (!row.back().is_string()) throw SchemaError("row status must be a string");
    table.rows.push_back(std::move(cells));
    table.row_status.push_back(row.back().get<std::string>());
  }
  return table;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace kerrpol
