#pragma once

#include <string>
#include <vector>

namespace lciclv {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;       // -1 when absent
  int require_column(const std::string& name, const std::string& file) const;
};

CsvTable read_csv(const std::string& path);

// One CSV record; quotes fields containing separators/quotes/newlines.
std::string csv_line(const std::vector<std::string>& fields);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

double parse_double(const std::string& text, const std::string& context);
long parse_long(const std::string& text, const std::string& context);

// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace lciclv
