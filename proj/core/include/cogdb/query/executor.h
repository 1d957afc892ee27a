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

#ifndef COGDB_QUERY_EXECUTOR_H_
#define COGDB_QUERY_EXECUTOR_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/ann.h"
#include "cogdb/query/ast.h"
#include "cogdb/query/catalog.h"
#include "cogdb/query/functions.h"
#include "cogdb/table.h"

namespace cogdb::query {

struct QueryResult {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExecStats {
  std::size_t bindings_examined = 0;
  std::size_t udf_calls = 0;       // evaluations that missed the memo
  std::size_t memo_hits = 0;
  std::size_t rows_pruned = 0;     // skipped by an approximate strategy
  std::size_t expansions = 0;      // relational-variable substitutions run
};

struct ExecOptions {
  UdfEnv udf;
  // Approximate strategies may skip rows whose tokens are not near the
  // constant side of a similarity predicate; exact evaluates everything.
  Strategy strategy;
  AnnIndexSet indices;
  ExecStats* stats = nullptr;
};

// Runs one query without relational variables. Throws UnknownTable,
// UnknownColumn, TypeError, UnconstrainedTokenVariable, UdfError.
QueryResult execute(const Query& query, const Catalog& catalog, const ExecOptions& options);

// Parses, expands relational variables when present, and executes.
QueryResult run_query(std::string_view sql, const Catalog& catalog, const ExecOptions& options);

// Output renderers. Table text aligns columns; CSV follows RFC 4180; JSON
// lines emit one object per row.
std::string format_table(const QueryResult& result);
std::string format_csv(const QueryResult& result);
std::string format_json_lines(const QueryResult& result);

}  // namespace cogdb::query

#endif  // COGDB_QUERY_EXECUTOR_H_
