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

#ifndef COGDB_QUERY_RELVARS_H_
#define COGDB_QUERY_RELVARS_H_

#include <string>
#include <vector>

#include "cogdb/query/ast.h"
#include "cogdb/query/catalog.h"

namespace cogdb::query {

bool has_relational_variables(const Query& query);

struct Expansion {
  Query query;
  std::string table;                  // comma-joined when several $ variables
  std::vector<std::string> columns;   // substituted column variables, in order
};

// One concrete query per (table, column) substitution that type-checks.
// A name after `$R.` is a column variable when no catalog table has a
// column of that name; otherwise it is a fixed column and tables lacking it
// are skipped. Comparisons between a substituted column and a literal must
// agree in kind (numeric column vs number literal, text vs string).
// Throws NoValidSubstitution.
std::vector<Expansion> expand_relational_variables(const Query& query, const Catalog& catalog);

}  // namespace cogdb::query

#endif  // COGDB_QUERY_RELVARS_H_
