#pragma once

#include <stdexcept>
#include <string>

namespace grub {

// Malformed graph input: negative weights, self loops, asymmetry, bad files.
class InvalidGraphError : public std::runtime_error {
 public:
  explicit InvalidGraphError(const std::string& what) : std::runtime_error(what) {}
};

// Estimate requested while the design matrix is still singular.
class SingularDesignError : public std::runtime_error {
 public:
  explicit SingularDesignError(const std::string& what) : std::runtime_error(what) {}
};

// Every influence candidate degenerated to a zero diagonal.
class DegenerateInfluenceError : public std::runtime_error {
 public:
  explicit DegenerateInfluenceError(const std::string& what) : std::runtime_error(what) {}
};

// A non-best arm shares the maximum mean, so per-gap sums are undefined.
class MultipleOptimaError : public std::runtime_error {
 public:
  explicit MultipleOptimaError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or missing input file (distinct from parse errors for exit codes).
class FileError : public std::runtime_error {
 public:
  explicit FileError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace grub
