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

#ifndef COGDB_QUERY_AST_H_
#define COGDB_QUERY_AST_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cogdb::query {

enum class ExprKind {
  kNumber,
  kString,
  kColumn,     // [qualifier.]name; qualifier may be a relational variable ($R)
  kRowStar,    // qualifier.*
  kCall,       // UDF or contains()
  kAggregate,  // MAX / MIN / AVG
  kCompare,
  kAnd,
  kOr,
  kNot,
};

enum class CompareOp { kEq, kNe, kLt, kGt, kLe, kGe };

std::string compare_op_text(CompareOp op);

struct Expr {
  ExprKind kind = ExprKind::kNumber;
  double number = 0.0;
  std::string text;       // string literal value, or canonical function name
  std::string qualifier;  // kColumn, kRowStar
  std::string name;       // kColumn
  CompareOp op = CompareOp::kEq;
  std::vector<Expr> args;
  std::size_t line = 0;
  std::size_t column = 0;

  bool operator==(const Expr& other) const;
};

// SQL-ish rendering, used for default column headers.
std::string to_string(const Expr& e);

struct SelectItem {
  Expr expr;
  std::string alias;
  bool star = false;  // SELECT *
};

struct Source {
  enum class Kind { kTable, kTokenVar, kRelVar };
  Kind kind = Kind::kTable;
  std::string name;   // table name, token variable or "$R"
  std::string alias;  // defaults to name
  std::size_t line = 0;
  std::size_t column = 0;
};

struct OrderItem {
  Expr expr;
  bool descending = false;
};

struct Query {
  std::vector<SelectItem> select;
  std::vector<Source> from;
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::vector<OrderItem> order_by;
  std::optional<std::size_t> limit;
};

}  // namespace cogdb::query

#endif  // COGDB_QUERY_AST_H_
