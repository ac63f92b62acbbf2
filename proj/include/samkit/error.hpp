// Copyright 2026 The samkit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SAMKIT_ERROR_HPP
#define SAMKIT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace samkit {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kIndexOutOfRange,
  kStructureMismatch,
  kFactorizationFailure,
  kIo,
  kParse,
  kConfig,
};

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when incomplete factorization meets a pivot it cannot use.
class FactorizationError : public Error {
 public:
  FactorizationError(std::size_t row, const std::string& what)
      : Error(ErrorCode::kFactorizationFailure, what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Raised when a matrix does not have the structure a SAM plan was built for.
class StructureError : public Error {
 public:
  StructureError(std::size_t column, const std::string& what)
      : Error(ErrorCode::kStructureMismatch, what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace samkit

#endif  // SAMKIT_ERROR_HPP
