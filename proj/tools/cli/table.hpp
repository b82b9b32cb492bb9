// CSV tables emitted by the command-line front end: `#` metadata lines, a
// header row, then data rows. No timestamps, so reruns are byte-identical.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace subwit::cli {

struct Table {
  std::string name;  // file stem
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_meta(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }
  void add_meta(const std::string& key, double value);
  void add_values(const std::vector<double>& values);
  void add_row(std::vector<std::string> values) { rows.push_back(std::move(values)); }
  std::string to_csv() const;
  // Column lookup by header name; throws std::out_of_range.
  std::size_t column(const std::string& header_name) const;
  double number(std::size_t row, const std::string& header_name) const;
  std::string meta_value(const std::string& key) const;  // throws std::out_of_range
};

std::string format_number(double x);

// Writes through a temporary file in the same directory and renames it over
// the target. Creates the directory if needed.
void write_atomic(const std::string& path, const std::string& contents);

}  // namespace subwit::cli
