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

#include "cogdb/query/parser.h"

#include "cogdb/error.h"
#include "cogdb/query/functions.h"
#include "cogdb/query/lexer.h"
#include "cogdb/util/strings.h"

namespace cogdb::query {

std::string compare_op_text(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
    case CompareOp::kLt: return "<";
    case CompareOp::kGt: return ">";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGe: return ">=";
  }
  return "?";
}

bool Expr::operator==(const Expr& o) const {
  return kind == o.kind && number == o.number && text == o.text && qualifier == o.qualifier &&
         name == o.name && op == o.op && args == o.args;
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kNumber: return util::format_double(e.number);
    case ExprKind::kString: {
      std::string out = "'";
      for (char c : e.text) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
      }
      return out + "'";
    }
    case ExprKind::kColumn: return e.qualifier.empty() ? e.name : e.qualifier + "." + e.name;
    case ExprKind::kRowStar: return e.qualifier + ".*";
    case ExprKind::kCall:
    case ExprKind::kAggregate: {
      std::string out = e.text + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(e.args[i]);
      }
      return out + ")";
    }
    case ExprKind::kCompare:
      return to_string(e.args[0]) + " " + compare_op_text(e.op) + " " + to_string(e.args[1]);
    case ExprKind::kAnd: return "(" + to_string(e.args[0]) + " AND " + to_string(e.args[1]) + ")";
    case ExprKind::kOr: return "(" + to_string(e.args[0]) + " OR " + to_string(e.args[1]) + ")";
    case ExprKind::kNot: return "NOT " + to_string(e.args[0]);
  }
  return "?";
}

namespace {

constexpr std::string_view kReserved[] = {"SELECT", "FROM", "WHERE", "GROUP", "BY",  "ORDER",
                                          "ASC",    "DESC", "LIMIT", "AS",    "AND", "OR",
                                          "NOT",    "TOKEN"};

bool is_reserved(std::string_view word) {
  for (std::string_view r : kReserved) {
    if (util::iequals(r, word)) return true;
  }
  return false;
}

bool contains_aggregate(const Expr& e) {
  if (e.kind == ExprKind::kAggregate) return true;
  for (const Expr& a : e.args) {
    if (contains_aggregate(a)) return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  Query parse_query() {
    Query q;
    expect_keyword("SELECT");
    parse_select_list(q);
    expect_keyword("FROM");
    parse_sources(q);
    if (accept_keyword("WHERE")) q.where = parse_or();
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        q.group_by.push_back(parse_or());
      } while (accept_symbol(","));
    }
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do {
        OrderItem item;
        item.expr = parse_or();
        if (accept_keyword("DESC")) {
          item.descending = true;
        } else {
          accept_keyword("ASC");
        }
        q.order_by.push_back(std::move(item));
      } while (accept_symbol(","));
    }
    if (accept_keyword("LIMIT")) {
      const Tok& t = peek();
      if (t.kind != TokKind::kNumber || t.number < 0 || t.number != static_cast<double>(
                                                             static_cast<std::size_t>(t.number))) {
        fail("LIMIT expects a non-negative integer", t);
      }
      q.limit = static_cast<std::size_t>(t.number);
      ++pos_;
    }
    accept_symbol(";");
    if (peek().kind != TokKind::kEnd) fail("unexpected '" + peek().text + "'", peek());
    validate(q);
    return q;
  }

 private:
  const Tok& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  [[noreturn]] void fail(const std::string& msg, const Tok& at) const {
    throw SyntaxError(msg, at.line, at.column);
  }

  bool is_keyword(const Tok& t, std::string_view kw) const {
    return t.kind == TokKind::kIdent && util::iequals(t.text, kw);
  }

  bool accept_keyword(std::string_view kw) {
    if (is_keyword(peek(), kw)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) {
      const Tok& t = peek();
      fail("expected " + std::string(kw) +
               (t.kind == TokKind::kEnd ? " but the statement ended" : " near '" + t.text + "'"),
           t);
    }
  }

  bool is_symbol(const Tok& t, std::string_view s) const {
    return t.kind == TokKind::kSymbol && t.text == s;
  }

  bool accept_symbol(std::string_view s) {
    if (is_symbol(peek(), s)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) {
      const Tok& t = peek();
      fail("expected '" + std::string(s) + "'" +
               (t.kind == TokKind::kEnd ? " but the statement ended" : " near '" + t.text + "'"),
           t);
    }
  }

  std::string expect_name(const char* what) {
    const Tok& t = peek();
    if (t.kind != TokKind::kIdent || is_reserved(t.text)) {
      fail(std::string("expected ") + what +
               (t.kind == TokKind::kEnd ? " but the statement ended" : " near '" + t.text + "'"),
           t);
    }
    ++pos_;
    return t.text;
  }

  std::string parse_alias() {
    if (accept_keyword("AS")) return expect_name("an alias");
    const Tok& t = peek();
    if (t.kind == TokKind::kIdent && !is_reserved(t.text)) {
      ++pos_;
      return t.text;
    }
    return {};
  }

  void parse_select_list(Query& q) {
    do {
      SelectItem item;
      if (is_symbol(peek(), "*")) {
        ++pos_;
        item.star = true;
      } else {
        item.expr = parse_or();
        item.alias = parse_alias();
      }
      q.select.push_back(std::move(item));
    } while (accept_symbol(","));
  }

  void parse_sources(Query& q) {
    bool in_token_list = false;
    do {
      const Tok& t = peek();
      Source s;
      s.line = t.line;
      s.column = t.column;
      if (is_keyword(t, "TOKEN")) {
        ++pos_;
        s.kind = Source::Kind::kTokenVar;
        s.name = expect_name("a token variable name");
        s.alias = s.name;
        in_token_list = true;
      } else if (t.kind == TokKind::kRelVar) {
        ++pos_;
        s.kind = Source::Kind::kRelVar;
        s.name = t.text;
        s.alias = parse_alias();
        if (s.alias.empty()) s.alias = s.name;
        in_token_list = false;
      } else {
        s.name = expect_name("a table name");
        s.alias = parse_alias();
        // After `Token a`, bare names keep declaring token variables.
        if (in_token_list && s.alias.empty()) {
          s.kind = Source::Kind::kTokenVar;
        } else {
          in_token_list = false;
        }
        if (s.alias.empty()) s.alias = s.name;
      }
      q.from.push_back(std::move(s));
    } while (accept_symbol(","));
  }

  Expr parse_or() {
    Expr left = parse_and();
    while (is_keyword(peek(), "OR")) {
      const Tok& t = peek();
      ++pos_;
      Expr e = node(ExprKind::kOr, t);
      e.args.push_back(std::move(left));
      e.args.push_back(parse_and());
      left = std::move(e);
    }
    return left;
  }

  Expr parse_and() {
    Expr left = parse_not();
    while (is_keyword(peek(), "AND")) {
      const Tok& t = peek();
      ++pos_;
      Expr e = node(ExprKind::kAnd, t);
      e.args.push_back(std::move(left));
      e.args.push_back(parse_not());
      left = std::move(e);
    }
    return left;
  }

  Expr parse_not() {
    if (is_keyword(peek(), "NOT")) {
      Expr e = node(ExprKind::kNot, peek());
      ++pos_;
      e.args.push_back(parse_not());
      return e;
    }
    return parse_compare();
  }

  Expr parse_compare() {
    Expr left = parse_primary();
    const Tok& t = peek();
    if (t.kind != TokKind::kSymbol) return left;
    CompareOp op;
    if (t.text == "=") op = CompareOp::kEq;
    else if (t.text == "!=" || t.text == "<>") op = CompareOp::kNe;
    else if (t.text == "<") op = CompareOp::kLt;
    else if (t.text == ">") op = CompareOp::kGt;
    else if (t.text == "<=") op = CompareOp::kLe;
    else if (t.text == ">=") op = CompareOp::kGe;
    else return left;
    ++pos_;
    Expr e = node(ExprKind::kCompare, t);
    e.op = op;
    e.args.push_back(std::move(left));
    e.args.push_back(parse_primary());
    return e;
  }

  Expr node(ExprKind kind, const Tok& at) const {
    Expr e;
    e.kind = kind;
    e.line = at.line;
    e.column = at.column;
    return e;
  }

  Expr parse_primary() {
    const Tok& t = peek();
    switch (t.kind) {
      case TokKind::kNumber: {
        ++pos_;
        Expr e = node(ExprKind::kNumber, t);
        e.number = t.number;
        return e;
      }
      case TokKind::kString: {
        ++pos_;
        Expr e = node(ExprKind::kString, t);
        e.text = t.text;
        return e;
      }
      case TokKind::kSymbol:
        if (t.text == "-" && peek(1).kind == TokKind::kNumber) {
          ++pos_;
          Expr e = node(ExprKind::kNumber, t);
          e.number = -peek().number;
          ++pos_;
          return e;
        }
        if (t.text == "(") {
          ++pos_;
          Expr e = parse_or();
          expect_symbol(")");
          return e;
        }
        fail("unexpected '" + t.text + "'", t);
      case TokKind::kRelVar: {
        ++pos_;
        expect_symbol(".");
        return column_after_qualifier(t);
      }
      case TokKind::kIdent: {
        if (is_reserved(t.text)) fail("unexpected keyword " + util::to_lower(t.text), t);
        ++pos_;
        if (is_symbol(peek(), "(")) return parse_call(t);
        if (accept_symbol(".")) return column_after_qualifier(t);
        Expr e = node(ExprKind::kColumn, t);
        e.name = t.text;
        return e;
      }
      case TokKind::kEnd:
        fail("expression expected but the statement ended", t);
    }
    fail("unexpected input", t);
  }

  Expr column_after_qualifier(const Tok& qual) {
    if (accept_symbol("*")) {
      Expr e = node(ExprKind::kRowStar, qual);
      e.qualifier = qual.text;
      return e;
    }
    const Tok& name = peek();
    if (name.kind != TokKind::kIdent) fail("expected a column name after '.'", name);
    ++pos_;
    Expr e = node(ExprKind::kColumn, qual);
    e.qualifier = qual.text;
    e.name = name.text;
    return e;
  }

  Expr parse_call(const Tok& name) {
    const FunctionSpec* fn = find_function(name.text);
    if (!fn) {
      throw Error(ErrorCode::kUnknownFunction,
                  "unknown function '" + name.text + "' at line " + std::to_string(name.line) +
                      ", column " + std::to_string(name.column));
    }
    Expr e = node(fn->kind == FunctionKind::kAggregate ? ExprKind::kAggregate : ExprKind::kCall,
                  name);
    e.text = fn->name;
    expect_symbol("(");
    if (!is_symbol(peek(), ")")) {
      do {
        e.args.push_back(parse_or());
      } while (accept_symbol(","));
    }
    expect_symbol(")");
    const int n = static_cast<int>(e.args.size());
    if (n < fn->min_args || (fn->max_args >= 0 && n > fn->max_args)) {
      std::string want = std::to_string(fn->min_args);
      if (fn->max_args < 0) want += " or more";
      else if (fn->max_args != fn->min_args) want += ".." + std::to_string(fn->max_args);
      throw SyntaxError(fn->name + " takes " + want + " argument(s), got " + std::to_string(n) +
                            "; usage: " + fn->signature,
                        name.line, name.column);
    }
    if (fn->kind == FunctionKind::kAggregate && contains_aggregate(e.args[0])) {
      throw SyntaxError("nested aggregate", name.line, name.column);
    }
    return e;
  }

  void validate(const Query& q) const {
    bool has_agg = false;
    const Expr* first_agg = nullptr;
    auto note = [&](const Expr& e) {
      if (contains_aggregate(e)) {
        has_agg = true;
        if (!first_agg) first_agg = &e;
      }
    };
    for (const SelectItem& s : q.select) {
      if (!s.star) note(s.expr);
    }
    for (const OrderItem& o : q.order_by) note(o.expr);
    if (has_agg && q.group_by.empty()) {
      throw SyntaxError("aggregate functions need GROUP BY", first_agg->line, first_agg->column);
    }
    if (q.where && contains_aggregate(*q.where)) {
      throw SyntaxError("aggregate functions are not allowed in WHERE", q.where->line,
                        q.where->column);
    }
    for (const Expr& g : q.group_by) {
      if (contains_aggregate(g)) {
        throw SyntaxError("aggregate functions are not allowed in GROUP BY", g.line, g.column);
      }
    }
    bool has_table = false;
    for (const Source& s : q.from) {
      if (s.kind != Source::Kind::kTokenVar) has_table = true;
    }
    if (!has_table) {
      throw SyntaxError("FROM needs at least one table", q.from.front().line,
                        q.from.front().column);
    }
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse(std::string_view sql) { return Parser(lex(sql)).parse_query(); }

}  // namespace cogdb::query
