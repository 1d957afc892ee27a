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

#ifndef COGDB_TABLE_H_
#define COGDB_TABLE_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace cogdb {

enum class ColumnKind { kText, kNumeric, kImageRef, kPrimaryKey };

std::string_view column_kind_name(ColumnKind kind);
std::optional<ColumnKind> parse_column_kind(std::string_view name);

// One named range of a user-managed categorization: values strictly below
// `upper` (and not claimed by an earlier range) map to `token`.
struct RangeRule {
  double upper = std::numeric_limits<double>::infinity();
  std::string token;
};

struct NumericMode {
  enum class Kind { kLiteral, kRounded, kRangeRule, kKMeans };

  Kind kind = Kind::kLiteral;
  int precision = 2;               // kRounded
  std::vector<RangeRule> ranges;   // kRangeRule, ascending `upper`
  int k = 1;                       // kKMeans

  static NumericMode literal() { return {}; }
  static NumericMode rounded(int precision = 2) {
    NumericMode m;
    m.kind = Kind::kRounded;
    m.precision = precision;
    return m;
  }
  static NumericMode range_rule(std::vector<RangeRule> ranges) {
    NumericMode m;
    m.kind = Kind::kRangeRule;
    m.ranges = std::move(ranges);
    return m;
  }
  static NumericMode kmeans(int k) {
    NumericMode m;
    m.kind = Kind::kKMeans;
    m.k = k;
    return m;
  }
};

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kText;
  NumericMode numeric_mode;  // numeric columns only
  double weight = 1.0;       // training attention
  bool prepend_name = false;
};

// Throws SchemaError unless exactly one primary key exists and every
// numeric mode is well formed.
void validate_schema(const std::vector<ColumnSchema>& schema);

// A missing cell is std::monostate.
using Cell = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Cell& c) {
  return std::holds_alternative<std::monostate>(c);
}
std::string cell_to_string(const Cell& c);

class RelationalTable {
 public:
  using Row = std::vector<Cell>;

  RelationalTable() = default;
  RelationalTable(std::string name, std::vector<ColumnSchema> columns);

  const std::string& name() const { return name_; }
  const std::vector<ColumnSchema>& columns() const { return columns_; }
  std::vector<ColumnSchema>& mutable_columns() { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_columns() const { return columns_.size(); }

  // Case-insensitive lookup.
  std::optional<std::size_t> column_index(std::string_view name) const;
  std::size_t key_column() const { return key_column_; }

  // Appends a row; throws SchemaError on arity mismatch or a duplicate /
  // missing primary key.
  void add_row(Row row);

  // Lookup by the raw primary-key value.
  std::optional<std::size_t> find_row(std::string_view key) const;

 private:
  std::string name_;
  std::vector<ColumnSchema> columns_;
  std::vector<Row> rows_;
  std::size_t key_column_ = 0;
  std::unordered_map<std::string, std::size_t> key_index_;
};

}  // namespace cogdb

#endif  // COGDB_TABLE_H_
