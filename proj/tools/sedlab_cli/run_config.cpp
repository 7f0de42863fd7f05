#include "sedlab_cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sedlab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::declare(const std::string& key, const std::string& default_value) {
  values_[key] = default_value;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  parse(ss.str(), path);
}

void RunConfig::parse(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", where + ": expected key = value");
    const std::string name = trim(line.substr(0, eq));
    const std::string key = section.empty() ? name : section + "." + name;
    set(key, trim(line.substr(eq + 1)));
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "unknown key");
  it->second = value;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("", "override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& RunConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "unknown key");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key) const { return raw(key); }

double RunConfig::get_double(const std::string& key) const {
  const std::string& s = raw(key);
  double v = 0.0;
  const char* b = s.data();
  if (!s.empty() && s.front() == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + s + "'");
  }
  return v;
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  const std::string& s = raw(key);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t RunConfig::get_uint(const std::string& key) const {
  const std::string& s = raw(key);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& s = raw(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + s + "'");
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  const std::string& s = raw(key);
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item = trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw ConfigError(key, "expected a comma-separated list of numbers, got '" + s + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

nlohmann::ordered_json RunConfig::resolved() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace sedlab::cli
