#pragma once

#include <stdexcept>
#include <string>

namespace sbm_ppm {

// Invalid model/solver parameters (bad n, K, capacities, rates).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed numerical input, e.g. non-finite scores.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A clustering that does not respect its own structure.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Instance exceeds the brute-force enumeration guard.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// File parsing failures; message carries the path and line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sbm_ppm
