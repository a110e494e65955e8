#pragma once

#include <map>
#include <string>
#include <vector>

namespace kerrpol {

/**
 * Result table shared by every run mode: an ordered set of named numeric
 * columns plus one status string per row ("ok" or the failure kind for that
 * row; failed cells hold NaN).
 *
 * Two serializations:
 *  - CSV: a bare header line and data rows, nothing else. Cells use %.17g so
 *    any reader recovers the exact doubles; NaN cells read "nan". The status
 *    string is appended as a final "status" column. Lines end with LF.
 *  - JSON: {"metadata": {..., "schema": [...]}, "rows": [[...]]}. Run
 *    provenance (engine, axis, resolved parameters, tool version, generation
 *    timestamp) lives only here; NaN cells serialize as null.
 */
struct Table {
  std::map<std::string, std::string> info;  // engine, axis, version, generated, ...
  std::map<std::string, double> params;     // resolved fixed parameters
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_status;
};

enum class TableFormat { csv, json };

// Parses "csv" / "json"; throws RangeError otherwise.
TableFormat table_format_from_name(const std::string& name);

// Renders the table. With fixed_metadata the volatile "generated" field is
// pinned to the literal "fixed" so repeated runs are byte-identical (CSV has
// no metadata and is unaffected).
std::string emit_table(const Table& table, TableFormat format, bool fixed_metadata);

// Same, to a file; throws IoError when the file cannot be written.
void emit_table_file(const Table& table, const std::string& path, TableFormat format,
                     bool fixed_metadata);

// Inverse of the JSON serialization, for consumers and round-trip checks.
Table parse_table_json(const std::string& text);

// Current UTC time, ISO 8601; the default "generated" stamp.
std::string utc_timestamp();

}  // namespace kerrpol
