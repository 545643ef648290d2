#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace rdoa::csv {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_real(double value);
std::string format_real(const std::optional<double>& value);

/// Writes comma-separated fields followed by '\n'.
class RowWriter {
 public:
  explicit RowWriter(std::ostream& out) : out_(out) {}

  RowWriter& field(std::string_view text);
  RowWriter& field(double value) { return field(format_real(value)); }
  RowWriter& field(const std::optional<double>& value) { return field(format_real(value)); }
  RowWriter& field(int value) { return field(std::to_string(value)); }
  RowWriter& field(unsigned long long value) { return field(std::to_string(value)); }
  void end();

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace rdoa::csv
