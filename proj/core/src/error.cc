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

#include "cogdb/error.h"

namespace cogdb {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kMalformedHierarchy: return "MalformedHierarchy";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kDanglingForeignKey: return "DanglingForeignKey";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kAllTokensUnknown: return "AllTokensUnknown";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kInvalidFlag: return "InvalidFlag";
    case ErrorCode::kDegenerateDirection: return "DegenerateDirection";
    case ErrorCode::kUnknownConcept: return "UnknownConcept";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kUnknownFunction: return "UnknownFunction";
    case ErrorCode::kUnknownTable: return "UnknownTable";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kType: return "TypeError";
    case ErrorCode::kUdf: return "UDFError";
    case ErrorCode::kUnconstrainedTokenVariable: return "UnconstrainedTokenVariable";
    case ErrorCode::kNoValidSubstitution: return "NoValidSubstitution";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

SyntaxError::SyntaxError(const std::string& message, std::size_t line,
                         std::size_t column)
    : Error(ErrorCode::kSyntax, message + " at line " + std::to_string(line) +
                                    ", column " + std::to_string(column)),
      line_(line),
      column_(column),
      detail_(message) {}

FormatError::FormatError(const std::string& message, std::size_t offset)
    : Error(ErrorCode::kFormat,
            message + " (byte offset " + std::to_string(offset) + ")"),
      offset_(offset) {}

}  // namespace cogdb
