#include "sedlab/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace sedlab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
  bool first = true;
  for (auto c : columns) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) emit(v, first);
  out_ << '\n';
}

void CsvWriter::emit(double v, bool& first) {
  if (!first) out_ << ',';
  out_ << format_double(v);
  first = false;
}

void CsvWriter::emit(long long v, bool& first) {
  if (!first) out_ << ',';
  out_ << v;
  first = false;
}

void CsvWriter::emit(std::size_t v, bool& first) {
  if (!first) out_ << ',';
  out_ << v;
  first = false;
}

}  // namespace sedlab
