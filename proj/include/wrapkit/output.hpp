#pragma once

// Tabular results written as CSV (RFC 4180) or JSON.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wrapkit {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> footer;
};

enum class Format { csv, json };

/// %.17g; nan and inf spelled out.
std::string format_double(double x);
std::string csv_escape(const std::string& s);

/// Header row, data rows, then one "# key=value" line per footer entry.
std::string to_csv(const Table& t);
/// Array of row objects keyed by column, ending with {"footer": {...}}.
std::string to_json(const Table& t);

/// Writes to the path, or to stdout for "-". Throws ResourceError on I/O failure.
void write_table(const Table& t, const std::string& path, Format format);

}  // namespace wrapkit
