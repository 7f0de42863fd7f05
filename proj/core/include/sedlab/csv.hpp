#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace sedlab {

/// Shortest round-trip decimal representation. Deterministic, locale-free.
std::string format_double(double value);

/// Minimal comma-separated writer; one row per call.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> columns);
  void row(std::initializer_list<double> values);

  template <typename... Values>
  void row_values(const Values&... values) {
    bool first = true;
    ((emit(values, first)), ...);
    out_ << '\n';
  }

 private:
  void emit(double v, bool& first);
  void emit(long long v, bool& first);
  void emit(std::size_t v, bool& first);
  void emit(int v, bool& first) { emit(static_cast<long long>(v), first); }
  void emit(long v, bool& first) { emit(static_cast<long long>(v), first); }

  std::ostream& out_;
};

}  // namespace sedlab
