#pragma once

// Minimal CSV with a fixed number format: numbers are written with 12
// significant digits in the C locale, fields containing a comma, quote or
// newline are quoted.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rsc {

/// "%.12g"; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);
/// Empty for an absent value.
std::string format_number(const std::optional<double>& v);
/// Inverse of format_number; throws std::invalid_argument on bad text.
double parse_number(const std::string& s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name; throws std::out_of_range.
  std::size_t column(const std::string& name) const;
  void write(std::ostream& os) const;
  /// Throws std::runtime_error on a ragged row or unterminated quote.
  static CsvTable read(std::istream& is);
};

void write_csv_file(const std::string& path, const CsvTable& t);
CsvTable read_csv_file(const std::string& path);

}  // namespace rsc
