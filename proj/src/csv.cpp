#include "rdoa/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace rdoa::csv {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

std::string format_real(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string();
}

RowWriter& RowWriter::field(std::string_view text) {
  if (!first_) out_ << ',';
  out_ << text;
  first_ = false;
  return *this;
}

void RowWriter::end() {
  out_ << '\n';
  first_ = true;
}

}  // namespace rdoa::csv
