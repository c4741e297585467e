#pragma once

// RFC-4180 tables. Numbers are written with 17 significant digits in the
// classic locale, so identical inputs give identical bytes.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace hbea::harness {

using Cell = std::variant<std::string, double, std::int64_t>;

std::string format_double(double v);
std::string format_cell(const Cell& c);
/// Quotes a field when it contains a comma, quote, CR or LF.
std::string quote_field(const std::string& s);

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void add_row(const std::vector<Cell>& cells);
  /// Appends columns with a constant value to every row.
  void append_constant_columns(const std::vector<std::string>& names,
                               const std::vector<std::string>& values);

  std::string to_string() const;
  /// Throws IoError.
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Minimal reader for tables written by CsvTable (used by tests and plots).
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

}  // namespace hbea::harness
