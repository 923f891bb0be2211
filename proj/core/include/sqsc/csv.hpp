#pragma once
//
// Minimal RFC-4180 CSV reading/writing used by the experiment harness.
//

#include <string>
#include <vector>

#include "sqsc/common.hpp"

namespace sqsc {

/// Full-precision decimal rendering (17 significant digits round-trips).
std::string format_g17(double v);

/// Quote a field when it contains commas, quotes, or newlines.
std::string csv_field(const std::string& raw);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ParseError naming the missing column.
  std::size_t col(const std::string& name) const;
  double num(std::size_t row, std::size_t column) const;
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

CsvTable read_csv(const std::string& path);

}  // namespace sqsc
