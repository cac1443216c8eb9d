#include "hdoa/csv.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "hdoa/types.hpp"

namespace hdoa {
namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

} // namespace

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw ConfigError("csv: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(std::ostream& out, const CsvMeta& meta, const CsvTable& table) {
  for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
  write_line(out, table.columns);
  for (const auto& row : table.rows) write_line(out, row);
}

std::string csv_body(const std::string& document) {
  std::istringstream in(document);
  std::string line;
  std::string body;
  while (std::getline(in, line))
    if (line.empty() || line.front() != '#') body += line + '\n';
  return body;
}

} // namespace hdoa
