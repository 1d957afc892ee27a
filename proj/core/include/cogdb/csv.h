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

#ifndef COGDB_CSV_H_
#define COGDB_CSV_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/table.h"

namespace cogdb {

// RFC 4180 record parsing: quoted fields, doubled quotes, embedded newlines,
// CRLF or LF line endings. The first record is the header.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string write_csv(const std::vector<std::vector<std::string>>& records);

// Parses a schema sidecar document:
//   {"table": "sales", "columns": [
//      {"name": "custID", "kind": "primary_key"},
//      {"name": "Amount", "kind": "numeric", "mode": "kmeans", "k": 3},
//      {"name": "Items", "kind": "text", "weight": 2.0, "prepend_name": true}]}
// Numeric modes: "literal", "rounded" (+ "precision"), "range_rule"
// (+ "ranges": [{"upper": 50, "token": "low"}, {"token": "high"}]),
// "kmeans" (+ "k").
struct TableSchema {
  std::string table;
  std::vector<ColumnSchema> columns;
};
TableSchema parse_schema_json(std::string_view json_text);
std::string schema_to_json(const TableSchema& schema);

// Guesses a schema from the header and cells: the first column is the
// primary key; a column whose non-empty cells all parse as numbers is
// numeric (literal mode); everything else is text.
std::vector<ColumnSchema> infer_schema(
    const std::vector<std::vector<std::string>>& records);

// Builds a table from parsed records. Schema columns are matched to header
// names case-insensitively; empty cells become missing values.
RelationalTable table_from_records(
    std::string name, const std::vector<std::vector<std::string>>& records,
    const std::vector<ColumnSchema>& schema);

// Loads `csv_path`; when `schema_path` is empty the schema is inferred and the
// table is named after the file stem.
RelationalTable load_csv_table(const std::filesystem::path& csv_path,
                               const std::filesystem::path& schema_path = {});

std::string table_to_csv(const RelationalTable& table);

}  // namespace cogdb

#endif  // COGDB_CSV_H_
