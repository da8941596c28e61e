#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace pdsys {

/// Floats with 17 significant digits, so values round-trip exactly.
std::string format_double(double x);

/// RFC-4180 table: header row first, CRLF line endings, fields quoted when
/// they contain commas, quotes or line breaks.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Throws ShapeMismatch when the row width differs from the header.
  void add_row(std::vector<std::string> row);
  void add_row(const std::vector<double>& row);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string str() const;
  /// Throws IoError when the file cannot be written.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& field);

}  // namespace pdsys
