#pragma once

#include <stdexcept>
#include <string>

namespace mteval {

// Input could not be parsed (bad TSV row, non-numeric score, ...).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Corpus join failed (missing keys, empty join, inconsistent language pair).
class JoinError : public std::runtime_error {
 public:
  explicit JoinError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration (unknown metric, missing range, invalid manifest field).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Correlation is mathematically undefined (constant vector, too few items,
// or every candidate group degenerate).
class UndefinedCorrelation : public std::runtime_error {
 public:
  explicit UndefinedCorrelation(const std::string& msg, std::size_t excluded = 0)
      : std::runtime_error(msg), n_groups_excluded(excluded) {}
  std::size_t n_groups_excluded;
};

}  // namespace mteval
