#pragma once

#include <stdexcept>
#include <string>

namespace qmirror {

// Raised when a physics operation is called outside its domain
// (non-positive mass, missing reflected branch, mismatched grids, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised for malformed scenario files and CLI input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmirror
