#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace sedlab::cli {

/// Bad configuration input; `key()` is the fully qualified key when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Flat key/value configuration with a declared schema. Keys are
/// "section.name" (or bare names for top-level keys). Files use INI-like
/// syntax:
///
///   # comment
///   seed = 7
///   [oscillator]
///   gamma_rad = 1e-3
///
/// Values set later win, so command-line overrides are applied after the
/// file. Undeclared keys are rejected.
class RunConfig {
 public:
  void declare(const std::string& key, const std::string& default_value);
  bool declared(const std::string& key) const { return values_.count(key) != 0; }

  void load_file(const std::string& path);
  void parse(const std::string& text, const std::string& source = "<config>");
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value".
  void set_assignment(const std::string& assignment);

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  /// Every key with its resolved value, in key order.
  nlohmann::ordered_json resolved() const;

 private:
  const std::string& raw(const std::string& key) const;

  std::map<std::string, std::string> values_;
};

}  // namespace sedlab::cli
