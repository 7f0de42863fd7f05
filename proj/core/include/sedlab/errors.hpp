#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sedlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter violates its invariant. `key()` names
/// the offending field (e.g. "gamma_rad") so front ends can report it.
class ParameterError : public Error {
 public:
  ParameterError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)), message_(message) {}

  const std::string& key() const noexcept { return key_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string key_;
  std::string message_;
};

/// The integrated state became non-finite.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t step, std::optional<std::size_t> member = std::nullopt)
      : Error(describe(step, member)), step_(step), member_(member) {}

  std::size_t step() const noexcept { return step_; }
  std::optional<std::size_t> member() const noexcept { return member_; }

 private:
  static std::string describe(std::size_t step, std::optional<std::size_t> member) {
    std::string s = "non-finite state at integration step " + std::to_string(step);
    if (member) s += " (ensemble member " + std::to_string(*member) + ")";
    return s;
  }

  std::size_t step_;
  std::optional<std::size_t> member_;
};

/// A numerical procedure (e.g. adaptive quadrature) failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sedlab
