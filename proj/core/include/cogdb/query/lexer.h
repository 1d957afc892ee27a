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

#ifndef COGDB_QUERY_LEXER_H_
#define COGDB_QUERY_LEXER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cogdb::query {

enum class TokKind { kIdent, kRelVar, kNumber, kString, kSymbol, kEnd };

struct Tok {
  TokKind kind = TokKind::kEnd;
  std::string text;  // identifier, symbol, string contents, number spelling
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Strings: '...' (with '' escape), "..." and `...' (typeset quotes).
// Comments: -- to end of line. Throws SyntaxError.
std::vector<Tok> lex(std::string_view sql);

}  // namespace cogdb::query

#endif  // COGDB_QUERY_LEXER_H_
