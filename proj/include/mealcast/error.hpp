#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mealcast {

/// Coarse error class. The numeric values double as CLI exit codes.
enum class ErrorKind {
  validation = 1,  // bad input data, config, labels, or arguments
  runtime = 2,     // training divergence, I/O failure, nothing trainable
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& what) {
  return Error(ErrorKind::validation, what);
}

inline Error runtime_error(const std::string& what) {
  return Error(ErrorKind::runtime, what);
}

struct RowError {
  std::size_t row = 0;  // zero-based data row index (header excluded)
  std::string message;
};

/// Raised by loaders once every row has been examined, so callers see the
/// full list of bad rows instead of the first one.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::vector<RowError> rows)
      : Error(ErrorKind::validation, what), rows_(std::move(rows)) {}

  const std::vector<RowError>& rows() const noexcept { return rows_; }

 private:
  std::vector<RowError> rows_;
};

}  // namespace mealcast
