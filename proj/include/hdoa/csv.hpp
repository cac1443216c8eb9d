#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hdoa {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

using CsvMeta = std::vector<std::pair<std::string, std::string>>;

/// "%.12g"; integers print without exponent up to 12 digits.
std::string format_number(double v);

/// "# key=value" lines, then the header row and data rows.
void write_csv(std::ostream& out, const CsvMeta& meta, const CsvTable& table);

/// Lines of a CSV document that are not '#' comments.
std::string csv_body(const std::string& document);

} // namespace hdoa
