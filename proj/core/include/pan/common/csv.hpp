#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pan {

/// Shortest formatting that is still a lossless double round trip (17 significant digits).
std::string format_double(double value);

/// Minimal LF-terminated CSV writer. Doubles are always written with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace pan
