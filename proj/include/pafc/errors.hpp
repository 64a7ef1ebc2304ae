/**
 * @file errors.hpp
 * Exception types shared by the pafc library and the command-line harness.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace pafc {

/// Bad configuration: inconsistent options, too few class members for k folds...
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested rule base would exceed the configured rule cap.
class ResourceLimitError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

enum class DataErrorKind { missing_file, empty_file, ragged_row, non_numeric, single_class, malformed };

/// Problems with input data. Row and column are 1-based; 0 means "not applicable".
class DataError : public std::runtime_error {
 public:
  DataError(DataErrorKind kind, const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : std::runtime_error(what), kind_(kind), row_(row), column_(column) {}

  DataErrorKind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  DataErrorKind kind_;
  std::size_t row_;
  std::size_t column_;
};

/// Failure to write an output file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pafc
