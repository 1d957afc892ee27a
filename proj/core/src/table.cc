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

#include "cogdb/table.h"

#include "cogdb/error.h"
#include "cogdb/util/strings.h"

namespace cogdb {

std::string_view column_kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kText: return "text";
    case ColumnKind::kNumeric: return "numeric";
    case ColumnKind::kImageRef: return "image_ref";
    case ColumnKind::kPrimaryKey: return "primary_key";
  }
  return "text";
}

std::optional<ColumnKind> parse_column_kind(std::string_view name) {
  const std::string n = util::to_lower(name);
  if (n == "text") return ColumnKind::kText;
  if (n == "numeric") return ColumnKind::kNumeric;
  if (n == "image_ref") return ColumnKind::kImageRef;
  if (n == "primary_key") return ColumnKind::kPrimaryKey;
  return std::nullopt;
}

void validate_schema(const std::vector<ColumnSchema>& schema) {
  std::size_t keys = 0;
  for (const ColumnSchema& col : schema) {
    if (col.name.empty()) throw Error(ErrorCode::kSchema, "unnamed column");
    if (col.kind == ColumnKind::kPrimaryKey) ++keys;
    if (!(col.weight >= 0.0)) {
      throw Error(ErrorCode::kSchema, "negative weight on column " + col.name);
    }
    if (col.kind != ColumnKind::kNumeric) continue;
    const NumericMode& m = col.numeric_mode;
    if (m.kind == NumericMode::Kind::kKMeans && m.k < 1) {
      throw Error(ErrorCode::kSchema, "kmeans k must be >= 1 on " + col.name);
    }
    if (m.kind == NumericMode::Kind::kRounded && m.precision < 0) {
      throw Error(ErrorCode::kSchema, "precision must be >= 0 on " + col.name);
    }
    if (m.kind == NumericMode::Kind::kRangeRule) {
      if (m.ranges.empty()) {
        throw Error(ErrorCode::kSchema, "empty range list on " + col.name);
      }
      for (std::size_t i = 1; i < m.ranges.size(); ++i) {
        if (!(m.ranges[i - 1].upper < m.ranges[i].upper)) {
          throw Error(ErrorCode::kSchema,
                      "range bounds must ascend on " + col.name);
        }
      }
    }
  }
  if (keys != 1) {
    throw Error(ErrorCode::kSchema,
                "expected exactly one primary_key column, found " +
                    std::to_string(keys));
  }
}

std::string cell_to_string(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return util::format_double(*d);
  return {};
}

RelationalTable::RelationalTable(std::string name,
                                 std::vector<ColumnSchema> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  validate_schema(columns_);
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].kind == ColumnKind::kPrimaryKey) key_column_ = i;
  }
}

std::optional<std::size_t> RelationalTable::column_index(
    std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (util::iequals(columns_[i].name, name)) return i;
  }
  return std::nullopt;
}

void RelationalTable::add_row(Row row) {
  if (row.size() != columns_.size()) {
    throw Error(ErrorCode::kSchema,
                "row arity " + std::to_string(row.size()) + " != " +
                    std::to_string(columns_.size()) + " in table " + name_);
  }
  const Cell& key = row[key_column_];
  if (is_missing(key)) {
    throw Error(ErrorCode::kSchema, "missing primary key in table " + name_);
  }
  std::string key_str = cell_to_string(key);
  if (!key_index_.emplace(key_str, rows_.size()).second) {
    throw Error(ErrorCode::kSchema,
                "duplicate primary key '" + key_str + "' in table " + name_);
  }
  rows_.push_back(std::move(row));
}

std::optional<std::size_t> RelationalTable::find_row(
    std::string_view key) const {
  auto it = key_index_.find(std::string(key));
  if (it == key_index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace cogdb
