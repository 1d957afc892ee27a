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

#include "cogdb/query/lexer.h"

#include <cctype>
#include <charconv>

#include "cogdb/error.h"

namespace cogdb::query {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Tok> lex(std::string_view sql) {
  std::vector<Tok> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < sql.size(); ++k, ++i) {
      if (sql[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < sql.size()) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '-' && i + 1 < sql.size() && sql[i + 1] == '-') {
      while (i < sql.size() && sql[i] != '\n') advance();
      continue;
    }
    Tok t;
    t.line = line;
    t.column = col;

    if (ident_start(c)) {
      const std::size_t start = i;
      while (i < sql.size() && ident_char(sql[i])) advance();
      t.kind = TokKind::kIdent;
      t.text = std::string(sql.substr(start, i - start));
    } else if (c == '$') {
      advance();
      if (i >= sql.size() || !ident_start(sql[i])) {
        throw SyntaxError("expected a name after '$'", t.line, t.column);
      }
      const std::size_t start = i;
      while (i < sql.size() && ident_char(sql[i])) advance();
      t.kind = TokKind::kRelVar;
      t.text = "$" + std::string(sql.substr(start, i - start));
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < sql.size() &&
                std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      const std::size_t start = i;
      while (i < sql.size() && std::isdigit(static_cast<unsigned char>(sql[i]))) advance();
      if (i < sql.size() && sql[i] == '.') {
        advance();
        while (i < sql.size() && std::isdigit(static_cast<unsigned char>(sql[i]))) advance();
      }
      if (i < sql.size() && (sql[i] == 'e' || sql[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < sql.size() && (sql[j] == '+' || sql[j] == '-')) ++j;
        if (j < sql.size() && std::isdigit(static_cast<unsigned char>(sql[j]))) {
          advance(j - i);
          while (i < sql.size() && std::isdigit(static_cast<unsigned char>(sql[i]))) advance();
        }
      }
      t.kind = TokKind::kNumber;
      t.text = std::string(sql.substr(start, i - start));
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc() || p != t.text.data() + t.text.size()) {
        throw SyntaxError("malformed number '" + t.text + "'", t.line, t.column);
      }
      if (i < sql.size() && ident_start(sql[i])) {
        throw SyntaxError("malformed number '" + t.text + sql[i] + "'", t.line, t.column);
      }
    } else if (c == '\'' || c == '"' || c == '`') {
      advance();
      std::string value;
      bool closed = false;
      while (i < sql.size()) {
        const char d = sql[i];
        const bool closes = (c == '`') ? (d == '\'' || d == '`') : d == c;
        if (closes) {
          if (c != '`' && i + 1 < sql.size() && sql[i + 1] == c) {
            value.push_back(c);
            advance(2);
            continue;
          }
          advance();
          closed = true;
          break;
        }
        value.push_back(d);
        advance();
      }
      if (!closed) throw SyntaxError("unterminated string literal", t.line, t.column);
      t.kind = TokKind::kString;
      t.text = std::move(value);
    } else {
      static constexpr std::string_view kTwo[] = {"!=", "<>", "<=", ">="};
      t.kind = TokKind::kSymbol;
      bool matched = false;
      for (std::string_view two : kTwo) {
        if (sql.substr(i, 2) == two) {
          t.text = std::string(two);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("(),.*;=<>-").find(c) == std::string_view::npos) {
          throw SyntaxError(std::string("unexpected character '") + c + "'", t.line, t.column);
        }
        t.text = std::string(1, c);
        advance();
      }
    }
    out.push_back(std::move(t));
  }
  Tok end;
  end.kind = TokKind::kEnd;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace cogdb::query
