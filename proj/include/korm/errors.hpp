#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace korm {

enum class ErrorKind {
  dimension,
  range,
  constraint,
  parse,
  encoding,
  shape,
  insufficient_data,
  degenerate_lower_bound,
  progress,
  data,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::dimension: return "DimensionError";
    case ErrorKind::range: return "RangeError";
    case ErrorKind::constraint: return "ConstraintError";
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::encoding: return "EncodingError";
    case ErrorKind::shape: return "ShapeError";
    case ErrorKind::insufficient_data: return "InsufficientDataError";
    case ErrorKind::degenerate_lower_bound: return "DegenerateLowerBoundError";
    case ErrorKind::progress: return "ProgressError";
    case ErrorKind::data: return "DataError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& m) : Error(ErrorKind::dimension, m) {}
};

struct RangeError : Error {
  explicit RangeError(const std::string& m) : Error(ErrorKind::range, m) {}
};

// Carries both sides of the gamma/beta feasibility inequality so callers can
// report exactly how far a configuration is from admissible.
struct ConstraintError : Error {
  ConstraintError(const std::string& m, double lhs_value, double rhs_value)
      : Error(ErrorKind::constraint, m), lhs(lhs_value), rhs(rhs_value) {}
  double lhs;
  double rhs;
};

struct ParseError : Error {
  ParseError(const std::string& m, std::size_t row_number, std::size_t column_number)
      : Error(ErrorKind::parse, m), row(row_number), column(column_number) {}
  std::size_t row;
  std::size_t column;
};

struct EncodingError : Error {
  EncodingError(const std::string& m, std::size_t row_number, std::size_t column_number)
      : Error(ErrorKind::encoding, m), row(row_number), column(column_number) {}
  std::size_t row;
  std::size_t column;
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& m) : Error(ErrorKind::shape, m) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& m)
      : Error(ErrorKind::insufficient_data, m) {}
};

struct DegenerateLowerBoundError : Error {
  explicit DegenerateLowerBoundError(const std::string& m)
      : Error(ErrorKind::degenerate_lower_bound, m) {}
};

struct ProgressError : Error {
  explicit ProgressError(const std::string& m) : Error(ErrorKind::progress, m) {}
};

struct DataError : Error {
  explicit DataError(const std::string& m) : Error(ErrorKind::data, m) {}
};

}  // namespace korm
