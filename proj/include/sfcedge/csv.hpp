#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sfcedge {

// RFC 4180: CRLF line ends, fields quoted when they hold a comma, quote, CR or LF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

[[nodiscard]] std::string csv_escape(std::string_view field);

// Shortest round-trip-stable text for a double ("%.10g").
[[nodiscard]] std::string fmt(double x);

}  // namespace sfcedge
