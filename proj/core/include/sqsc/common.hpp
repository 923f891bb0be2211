#pragma once
//
// Shared error types and small helpers used across the library.
//

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqsc {

using Index = std::int64_t;

/// Invalid arguments or model parameters outside the theory's domain
/// (CLI maps this to exit code 3).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File-format or filesystem failures, always carrying path context.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed user-facing text input (operator specs, CSV, config values);
/// the CLI maps this to exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical routine failed to meet its own tolerance contract.
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sqsc
