// Copyright 2026 The cogdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COGDB_ERROR_H_
#define COGDB_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cogdb {

enum class ErrorCode {
  kConfig,
  kIo,
  kInsufficientData,
  kMalformedHierarchy,
  kSchema,
  kDanglingForeignKey,
  kEmptyCorpus,
  kDimensionMismatch,
  kFormat,
  kAllTokensUnknown,
  kZeroVector,
  kUnknownKey,
  kInvalidFlag,
  kDegenerateDirection,
  kUnknownConcept,
  kInvalidK,
  kSyntax,
  kUnknownFunction,
  kUnknownTable,
  kUnknownColumn,
  kType,
  kUdf,
  kUnconstrainedTokenVariable,
  kNoValidSubstitution,
  kChecksumMismatch,
  kVersionMismatch,
};

std::string_view error_code_name(ErrorCode code);

// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the query parser; line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

// Raised by model readers; offset is the byte position of the offending input.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t offset);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace cogdb

#endif  // COGDB_ERROR_H_
