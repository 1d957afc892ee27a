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

#ifndef COGDB_QUERY_PARSER_H_
#define COGDB_QUERY_PARSER_H_

#include <string_view>

#include "cogdb/query/ast.h"

namespace cogdb::query {

// Parses one SELECT statement. Function names are checked against the
// registry here. Throws SyntaxError, or Error(kUnknownFunction).
Query parse(std::string_view sql);

}  // namespace cogdb::query

#endif  // COGDB_QUERY_PARSER_H_
