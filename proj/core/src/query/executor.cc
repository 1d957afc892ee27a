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

#include "cogdb/query/executor.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "cogdb/csv.h"
#include "cogdb/error.h"
#include "cogdb/query/parser.h"
#include "cogdb/query/relvars.h"
#include "cogdb/util/strings.h"

namespace cogdb::query {

namespace {

struct Val {
  Cell cell;                        // monostate when missing
  std::vector<std::string> tokens;  // what a UDF sees
};

enum class BK {
  kNum, kStr, kCol, kRowScope, kTableScope, kTokVar, kUdf, kContains, kAgg, kCmp, kAnd, kOr, kNot
};

struct BExpr {
  BK k = BK::kNum;
  double num = 0.0;
  std::string str;
  std::vector<std::string> lit_tokens;
  std::size_t src = 0;
  std::size_t col = 0;
  std::size_t var = 0;
  const FunctionSpec* fn = nullptr;
  std::string agg;
  CompareOp op = CompareOp::kEq;
  std::vector<BExpr> args;
  std::uint64_t src_mask = 0;
  std::uint64_t var_mask = 0;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Binding {
  std::vector<std::size_t> rows;
  std::vector<std::string> toks;
};

struct TableSource {
  const CatalogTable* table = nullptr;
  std::string alias;
};

struct OrderKey {
  bool by_projection = false;
  std::size_t projection = 0;
  BExpr expr;
  bool descending = false;
};

std::string number_token(double v) {
  std::string s = util::format_double(v);
  for (char& c : s) {
    if (c == '.') c = '_';
  }
  if (!s.empty() && s[0] == '-') s = "neg" + s.substr(1);
  return s;
}

Val number_val(double v) { return {Cell{v}, {number_token(v)}}; }

bool is_missing_val(const Val& v) { return is_missing(v.cell); }

// Missing sorts after everything; numbers before strings.
int compare_cells(const Cell& a, const Cell& b) {
  const bool am = is_missing(a), bm = is_missing(b);
  if (am || bm) return am == bm ? 0 : (am ? 1 : -1);
  const bool an = std::holds_alternative<double>(a), bn = std::holds_alternative<double>(b);
  if (an && bn) {
    const double x = std::get<double>(a), y = std::get<double>(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (an != bn) return an ? -1 : 1;
  const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string cell_key(const Cell& c) {
  if (is_missing(c)) return "m";
  if (std::holds_alternative<double>(c)) return "n" + util::format_double(std::get<double>(c));
  return "s" + std::get<std::string>(c);
}

std::string row_key(const std::vector<Cell>& row, std::size_t n) {
  std::string k;
  for (std::size_t i = 0; i < n && i < row.size(); ++i) {
    k += cell_key(row[i]);
    k.push_back('\x1f');
  }
  return k;
}

void flatten_and(const BExpr& e, std::vector<const BExpr*>& out) {
  if (e.k == BK::kAnd) {
    flatten_and(e.args[0], out);
    flatten_and(e.args[1], out);
  } else {
    out.push_back(&e);
  }
}

std::vector<std::string> distinct(const std::vector<std::string>& v) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& t : v) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

class Executor {
 public:
  Executor(const Query& q, const Catalog& cat, const ExecOptions& opt)
      : q_(q), cat_(cat), opt_(opt) {}

  QueryResult run() {
    resolve_sources();
    bind_all();
    plan_token_domains();
    if (opt_.strategy.kind != Strategy::Kind::kExact) prefilter();

    Binding b;
    b.rows.assign(tables_.size(), 0);
    b.toks.assign(vars_.size(), {});
    descend(0, b);

    QueryResult result;
    result.columns = headers_;
    std::vector<std::vector<Cell>> keys;
    if (grouped_) {
      group_and_project(result, keys);
    } else {
      for (const Binding& bb : bindings_) {
        std::vector<Cell> row;
        for (const BExpr& p : proj_) row.push_back(eval(p, bb, nullptr).cell);
        keys.push_back(order_values(row, bb, nullptr));
        result.rows.push_back(std::move(row));
      }
    }
    sort_and_limit(result, keys);
    if (opt_.stats) opt_.stats->expansions = std::max<std::size_t>(opt_.stats->expansions, 1);
    return result;
  }

 private:
  // ---- binding -------------------------------------------------------------

  void resolve_sources() {
    std::unordered_set<std::string> aliases;
    for (const Source& s : q_.from) {
      const std::string key = util::to_lower(s.alias);
      if (!aliases.insert(key).second) {
        throw SyntaxError("duplicate name '" + s.alias + "' in FROM", s.line, s.column);
      }
      switch (s.kind) {
        case Source::Kind::kTable: {
          const CatalogTable* t = cat_.find(s.name);
          if (!t) throw Error(ErrorCode::kUnknownTable, "unknown table '" + s.name + "'");
          tables_.push_back({t, s.alias});
          break;
        }
        case Source::Kind::kTokenVar:
          vars_.push_back(s.name);
          break;
        case Source::Kind::kRelVar:
          throw Error(ErrorCode::kNoValidSubstitution,
                      "relational variable " + s.name + " must be expanded before execution");
      }
    }
    if (tables_.size() + vars_.size() > 64) {
      throw Error(ErrorCode::kConfig, "too many FROM entries (64 max)");
    }
  }

  std::optional<std::size_t> table_by_alias(std::string_view alias) const {
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      if (util::iequals(tables_[i].alias, alias)) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> var_by_name(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (util::iequals(vars_[i], name)) return i;
    }
    return std::nullopt;
  }

  BExpr bind(const Expr& e, bool scope_position = false) {
    BExpr b;
    b.line = e.line;
    b.column = e.column;
    switch (e.kind) {
      case ExprKind::kNumber:
        b.k = BK::kNum;
        b.num = e.number;
        break;
      case ExprKind::kString:
        b.k = BK::kStr;
        b.str = e.text;
        b.lit_tokens = normalize_text_token(e.text, "literal", cat_.stop_words());
        break;
      case ExprKind::kColumn: {
        if (e.qualifier.empty()) {
          if (auto v = var_by_name(e.name)) {
            b.k = BK::kTokVar;
            b.var = *v;
            b.var_mask = std::uint64_t{1} << *v;
            break;
          }
          if (scope_position) {
            if (auto t = table_by_alias(e.name)) {
              b.k = BK::kTableScope;
              b.src = *t;
              break;
            }
          }
          std::optional<std::size_t> found;
          for (std::size_t i = 0; i < tables_.size(); ++i) {
            if (auto c = tables_[i].table->table.column_index(e.name)) {
              if (found) {
                throw Error(ErrorCode::kUnknownColumn,
                            "column '" + e.name + "' is ambiguous; qualify it");
              }
              found = i;
              b.col = *c;
            }
          }
          if (!found) throw Error(ErrorCode::kUnknownColumn, "unknown column '" + e.name + "'");
          b.k = BK::kCol;
          b.src = *found;
        } else {
          auto t = table_by_alias(e.qualifier);
          if (!t) {
            throw Error(ErrorCode::kUnknownTable,
                        "unknown table or alias '" + e.qualifier + "'");
          }
          auto c = tables_[*t].table->table.column_index(e.name);
          if (!c) {
            throw Error(ErrorCode::kUnknownColumn, "unknown column '" + e.qualifier + "." +
                                                       e.name + "'");
          }
          b.k = BK::kCol;
          b.src = *t;
          b.col = *c;
        }
        b.src_mask = std::uint64_t{1} << b.src;
        break;
      }
      case ExprKind::kRowStar: {
        auto t = table_by_alias(e.qualifier);
        if (!t) {
          throw Error(ErrorCode::kUnknownTable, "unknown table or alias '" + e.qualifier + "'");
        }
        b.k = BK::kRowScope;
        b.src = *t;
        b.src_mask = std::uint64_t{1} << b.src;
        break;
      }
      case ExprKind::kCall: {
        b.fn = find_function(e.text);
        if (b.fn->kind == FunctionKind::kContains) {
          b.k = BK::kContains;
          b.args.push_back(bind(e.args[0], true));
          b.args.push_back(bind(e.args[1]));
        } else {
          b.k = BK::kUdf;
          for (const Expr& a : e.args) b.args.push_back(bind(a));
        }
        break;
      }
      case ExprKind::kAggregate:
        b.k = BK::kAgg;
        b.agg = e.text;
        b.args.push_back(bind(e.args[0]));
        break;
      case ExprKind::kCompare:
        b.k = BK::kCmp;
        b.op = e.op;
        b.args.push_back(bind(e.args[0]));
        b.args.push_back(bind(e.args[1]));
        break;
      case ExprKind::kAnd:
      case ExprKind::kOr:
        b.k = e.kind == ExprKind::kAnd ? BK::kAnd : BK::kOr;
        b.args.push_back(bind(e.args[0]));
        b.args.push_back(bind(e.args[1]));
        break;
      case ExprKind::kNot:
        b.k = BK::kNot;
        b.args.push_back(bind(e.args[0]));
        break;
    }
    for (const BExpr& a : b.args) {
      b.src_mask |= a.src_mask;
      b.var_mask |= a.var_mask;
    }
    if (b.k == BK::kTableScope) b.src_mask = 0;  // whole relation: no row dependency
    return b;
  }

  void bind_all() {
    for (const SelectItem& s : q_.select) {
      if (s.star) {
        for (std::size_t t = 0; t < tables_.size(); ++t) add_star(t, tables_.size() > 1);
        continue;
      }
      if (s.expr.kind == ExprKind::kRowStar) {
        auto t = table_by_alias(s.expr.qualifier);
        if (!t) {
          throw Error(ErrorCode::kUnknownTable,
                      "unknown table or alias '" + s.expr.qualifier + "'");
        }
        add_star(*t, true);
        continue;
      }
      proj_.push_back(bind(s.expr));
      headers_.push_back(s.alias.empty() ? to_string(s.expr) : s.alias);
      display_.push_back(to_string(s.expr));
      aliases_.push_back(s.alias);
    }
    if (q_.where) where_ = bind(*q_.where);
    for (const Expr& g : q_.group_by) group_.push_back(bind(g));
    grouped_ = !group_.empty();

    for (const OrderItem& o : q_.order_by) {
      OrderKey key;
      key.descending = o.descending;
      const std::string text = to_string(o.expr);
      for (std::size_t i = 0; i < proj_.size() && !key.by_projection; ++i) {
        const bool alias_hit = o.expr.kind == ExprKind::kColumn && o.expr.qualifier.empty() &&
                               !aliases_[i].empty() && util::iequals(aliases_[i], o.expr.name);
        if (alias_hit || util::iequals(display_[i], text)) {
          key.by_projection = true;
          key.projection = i;
        }
      }
      if (!key.by_projection) {
        if (o.expr.kind != ExprKind::kColumn) {
          throw SyntaxError("ORDER BY must name a projected column, alias or column", o.expr.line,
                            o.expr.column);
        }
        key.expr = bind(o.expr);
      }
      order_.push_back(std::move(key));
    }

    // Token variables referenced in the output produce one row per binding.
    std::uint64_t out_vars = 0;
    for (const BExpr& p : proj_) out_vars |= p.var_mask;
    for (const OrderKey& k : order_) out_vars |= k.expr.var_mask;
    for (const BExpr& g : group_) out_vars |= g.var_mask;
    existential_ = out_vars == 0;
  }

  void add_star(std::size_t t, bool qualify) {
    const RelationalTable& table = tables_[t].table->table;
    for (std::size_t c = 0; c < table.num_columns(); ++c) {
      BExpr b;
      b.k = BK::kCol;
      b.src = t;
      b.col = c;
      b.src_mask = std::uint64_t{1} << t;
      proj_.push_back(b);
      const std::string name =
          qualify ? tables_[t].alias + "." + table.columns()[c].name : table.columns()[c].name;
      headers_.push_back(name);
      display_.push_back(name);
      aliases_.push_back({});
    }
  }

  void plan_token_domains() {
    std::vector<const BExpr*> conj;
    if (where_) flatten_and(*where_, conj);
    domains_.assign(vars_.size(), nullptr);
    std::vector<const BExpr*> domain_conj(vars_.size(), nullptr);
    for (const BExpr* c : conj) {
      if (c->k != BK::kContains || c->args[1].k != BK::kTokVar || c->args[0].var_mask != 0) {
        continue;
      }
      const std::size_t v = c->args[1].var;
      if (!domains_[v]) {
        domains_[v] = &c->args[0];
        domain_conj[v] = c;
      }
    }
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (!domains_[v]) {
        throw Error(ErrorCode::kUnconstrainedTokenVariable,
                    "token variable '" + vars_[v] +
                        "' needs a contains(<column | T.* | T>, " + vars_[v] +
                        ") predicate joined by AND");
      }
    }
    const std::size_t levels = tables_.size() + vars_.size();
    checks_.assign(std::max<std::size_t>(levels, 1), {});
    for (const BExpr* c : conj) {
      if (std::find(domain_conj.begin(), domain_conj.end(), c) != domain_conj.end()) continue;
      std::size_t level = 0;
      for (std::size_t t = 0; t < tables_.size(); ++t) {
        if (c->src_mask >> t & 1) level = t;
      }
      for (std::size_t v = 0; v < vars_.size(); ++v) {
        if (c->var_mask >> v & 1) level = tables_.size() + v;
      }
      checks_[level].push_back(c);
    }
  }

  // ---- approximate pruning ---------------------------------------------------

  void prefilter() {
    if (!where_ || !opt_.udf.model) return;
    const EmbeddingModel& model = *opt_.udf.model;
    std::vector<const BExpr*> conj;
    flatten_and(*where_, conj);
    allowed_.assign(tables_.size(), {});
    for (const BExpr* c : conj) {
      if (c->k != BK::kCmp) continue;
      const BExpr* udf = nullptr;
      if (c->args[0].k == BK::kUdf && c->args[1].k == BK::kNum &&
          (c->op == CompareOp::kGt || c->op == CompareOp::kGe)) {
        udf = &c->args[0];
      } else if (c->args[1].k == BK::kUdf && c->args[0].k == BK::kNum &&
                 (c->op == CompareOp::kLt || c->op == CompareOp::kLe)) {
        udf = &c->args[1];
      }
      if (!udf || udf->fn->prune == PruneShape::kNone || udf->var_mask != 0) continue;
      std::size_t col_arg = udf->args.size();
      bool ok = true;
      for (std::size_t i = 0; i < udf->args.size(); ++i) {
        const BK k = udf->args[i].k;
        if (k == BK::kCol) {
          if (col_arg != udf->args.size()) ok = false;
          col_arg = i;
        } else if (k != BK::kStr && k != BK::kNum) {
          ok = false;
        }
      }
      if (!ok || col_arg == udf->args.size()) continue;
      std::vector<std::string> constants;
      for (std::size_t i = 0; i < udf->args.size(); ++i) {
        if (i == col_arg) continue;
        const BExpr& a = udf->args[i];
        if (a.k == BK::kStr) {
          constants.insert(constants.end(), a.lit_tokens.begin(), a.lit_tokens.end());
        } else {
          constants.push_back(number_token(a.num));
        }
      }
      Vec query;
      try {
        if (udf->fn->prune == PruneShape::kAverage) {
          query = average_tokens(constants, model, opt_.udf.oov);
        } else {
          const std::size_t cand = udf->fn->prune_candidate_arg < 0
                                       ? udf->args.size() - 1
                                       : static_cast<std::size_t>(udf->fn->prune_candidate_arg);
          if (cand != col_arg) continue;
          query = average_tokens(constants, model, OovPolicy::kError);
          for (const std::string& t : constants) {
            if (!model.contains(t)) throw Error(ErrorCode::kUnknownKey, t);
          }
        }
      } catch (const Error&) {
        continue;  // let exact evaluation report it
      }
      if (std::all_of(query.begin(), query.end(), [](double x) { return x == 0.0; })) continue;
      const std::vector<std::size_t> cand =
          candidate_indices(query, model, opt_.strategy, opt_.indices);
      std::unordered_set<std::string> near;
      for (std::size_t i : cand) near.insert(model.token(i));
      const BExpr& colx = udf->args[col_arg];
      const CatalogTable& t = *tables_[colx.src].table;
      std::vector<char>& allow = allowed_[colx.src];
      if (allow.empty()) allow.assign(t.table.num_rows(), 1);
      for (std::size_t r = 0; r < t.table.num_rows(); ++r) {
        const auto& toks = t.tokens[r][colx.col];
        const bool hit =
            std::any_of(toks.begin(), toks.end(), [&](const std::string& s) { return near.count(s); });
        if (!hit && allow[r]) {
          allow[r] = 0;
          if (opt_.stats) ++opt_.stats->rows_pruned;
        }
      }
    }
  }

  // ---- enumeration -----------------------------------------------------------

  bool passes(std::size_t level, const Binding& b) {
    if (level >= checks_.size()) return true;
    for (const BExpr* c : checks_[level]) {
      if (!truthy(eval(*c, b, nullptr))) return false;
    }
    return true;
  }

  bool descend(std::size_t level, Binding& b) {
    const std::size_t nt = tables_.size();
    if (level == nt + vars_.size()) {
      if (opt_.stats) ++opt_.stats->bindings_examined;
      bindings_.push_back(b);
      return existential_;
    }
    if (level < nt) {
      const CatalogTable& t = *tables_[level].table;
      const std::vector<char>* allow =
          (!allowed_.empty() && !allowed_[level].empty()) ? &allowed_[level] : nullptr;
      for (std::size_t r = 0; r < t.table.num_rows(); ++r) {
        if (allow && !(*allow)[r]) continue;
        b.rows[level] = r;
        if (!passes(level, b)) continue;
        descend(level + 1, b);
      }
      return false;
    }
    const std::size_t v = level - nt;
    const std::vector<std::string> domain = distinct(eval(*domains_[v], b, nullptr).tokens);
    for (const std::string& tok : domain) {
      b.toks[v] = tok;
      if (!passes(level, b)) continue;
      if (descend(level + 1, b)) return true;
    }
    return false;
  }

  // ---- evaluation ------------------------------------------------------------

  bool truthy(const Val& v) const {
    if (is_missing_val(v)) return false;
    if (std::holds_alternative<double>(v.cell)) return std::get<double>(v.cell) != 0.0;
    throw Error(ErrorCode::kType, "text value used as a condition");
  }

  std::vector<std::string> row_tokens(std::size_t src, std::size_t row) const {
    std::vector<std::string> out;
    for (const auto& cell : tables_[src].table->tokens[row]) {
      out.insert(out.end(), cell.begin(), cell.end());
    }
    return out;
  }

  const std::vector<std::string>& table_tokens(std::size_t src) {
    auto it = table_token_cache_.find(src);
    if (it != table_token_cache_.end()) return it->second;
    std::vector<std::string> all;
    const CatalogTable& t = *tables_[src].table;
    for (std::size_t r = 0; r < t.table.num_rows(); ++r) {
      for (const auto& cell : t.tokens[r]) all.insert(all.end(), cell.begin(), cell.end());
    }
    return table_token_cache_.emplace(src, distinct(all)).first->second;
  }

  std::string row_context(const Binding& b) const {
    std::string out;
    for (std::size_t t = 0; t < tables_.size(); ++t) {
      const RelationalTable& table = tables_[t].table->table;
      if (!out.empty()) out += ", ";
      out += tables_[t].alias + " key=" +
             cell_to_string(table.rows()[b.rows[t]][table.key_column()]);
    }
    for (std::size_t v = 0; v < vars_.size(); ++v) out += ", " + vars_[v] + "=" + b.toks[v];
    return out;
  }

  bool compare(const Val& a, const Val& b, CompareOp op) const {
    if (is_missing_val(a) || is_missing_val(b)) return false;
    int c = 0;
    const bool an = std::holds_alternative<double>(a.cell);
    const bool bn = std::holds_alternative<double>(b.cell);
    if (an && bn) {
      const double x = std::get<double>(a.cell), y = std::get<double>(b.cell);
      c = x < y ? -1 : (x > y ? 1 : 0);
    } else if (an != bn) {
      const std::string& s = std::get<std::string>(an ? b.cell : a.cell);
      double parsed = 0.0;
      if (!util::parse_double(s, parsed)) {
        throw Error(ErrorCode::kType, "cannot compare a number with text '" + s + "'");
      }
      const double x = an ? std::get<double>(a.cell) : parsed;
      const double y = an ? parsed : std::get<double>(b.cell);
      c = x < y ? -1 : (x > y ? 1 : 0);
    } else {
      const std::string& x = std::get<std::string>(a.cell);
      const std::string& y = std::get<std::string>(b.cell);
      if (op == CompareOp::kEq || op == CompareOp::kNe) {
        const bool eq = util::iequals(x, y) || (!a.tokens.empty() && a.tokens == b.tokens);
        return op == CompareOp::kEq ? eq : !eq;
      }
      const int r = x.compare(y);
      c = r < 0 ? -1 : (r > 0 ? 1 : 0);
    }
    switch (op) {
      case CompareOp::kEq: return c == 0;
      case CompareOp::kNe: return c != 0;
      case CompareOp::kLt: return c < 0;
      case CompareOp::kGt: return c > 0;
      case CompareOp::kLe: return c <= 0;
      case CompareOp::kGe: return c >= 0;
    }
    return false;
  }

  Val call_udf(const BExpr& e, const Binding& b, const std::vector<Binding>* group) {
    std::vector<UdfArg> args;
    std::string key = e.fn->name;
    for (const BExpr& a : e.args) {
      Val v = eval(a, b, group);
      UdfArg arg;
      arg.tokens = std::move(v.tokens);
      if (std::holds_alternative<double>(v.cell)) arg.number = std::get<double>(v.cell);
      key.push_back('\x1e');
      key += util::join(arg.tokens, "\x1f");
      if (arg.number) key += "#" + util::format_double(*arg.number);
      args.push_back(std::move(arg));
    }
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (opt_.stats) ++opt_.stats->memo_hits;
      return number_val(it->second);
    }
    double r = 0.0;
    try {
      r = e.fn->fn(args, opt_.udf);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::kConfig) throw;
      throw Error(ErrorCode::kUdf, e.fn->name + ": " + err.what() + " (" +
                                       std::string(error_code_name(err.code())) + " at " +
                                       row_context(b) + ")");
    }
    if (opt_.stats) ++opt_.stats->udf_calls;
    memo_.emplace(std::move(key), r);
    return number_val(r);
  }

  Val aggregate(const BExpr& e, const std::vector<Binding>* group) {
    if (!group) throw Error(ErrorCode::kType, e.agg + " outside GROUP BY");
    std::vector<Val> vals;
    for (const Binding& gb : *group) {
      Val v = eval(e.args[0], gb, nullptr);
      if (!is_missing_val(v)) vals.push_back(std::move(v));
    }
    if (vals.empty()) return {};
    const bool numeric = std::holds_alternative<double>(vals[0].cell);
    for (const Val& v : vals) {
      if (std::holds_alternative<double>(v.cell) != numeric) {
        throw Error(ErrorCode::kType, e.agg + " over mixed numbers and text");
      }
    }
    if (e.agg == "AVG") {
      if (!numeric) throw Error(ErrorCode::kType, "AVG over a text column");
      double s = 0.0;
      for (const Val& v : vals) s += std::get<double>(v.cell);
      return number_val(s / static_cast<double>(vals.size()));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
      const int c = compare_cells(vals[i].cell, vals[best].cell);
      if (e.agg == "MAX" ? c > 0 : c < 0) best = i;
    }
    return vals[best];
  }

  Val eval(const BExpr& e, const Binding& b, const std::vector<Binding>* group) {
    switch (e.k) {
      case BK::kNum: return number_val(e.num);
      case BK::kStr: return {Cell{e.str}, e.lit_tokens};
      case BK::kCol: {
        const CatalogTable& t = *tables_[e.src].table;
        const std::size_t r = b.rows[e.src];
        return {t.table.rows()[r][e.col], t.tokens[r][e.col]};
      }
      case BK::kRowScope: {
        auto toks = row_tokens(e.src, b.rows[e.src]);
        return {Cell{util::join(toks, " ")}, std::move(toks)};
      }
      case BK::kTableScope:
        return {Cell{tables_[e.src].table->table.name()}, table_tokens(e.src)};
      case BK::kTokVar: return {Cell{b.toks[e.var]}, {b.toks[e.var]}};
      case BK::kUdf: return call_udf(e, b, group);
      case BK::kContains: {
        const Val scope = eval(e.args[0], b, group);
        const Val needle = eval(e.args[1], b, group);
        if (needle.tokens.empty()) return number_val(0.0);
        for (const std::string& t : needle.tokens) {
          if (std::find(scope.tokens.begin(), scope.tokens.end(), t) == scope.tokens.end()) {
            return number_val(0.0);
          }
        }
        return number_val(1.0);
      }
      case BK::kAgg: return aggregate(e, group);
      case BK::kCmp:
        return number_val(compare(eval(e.args[0], b, group), eval(e.args[1], b, group), e.op)
                              ? 1.0
                              : 0.0);
      case BK::kAnd:
        return number_val(truthy(eval(e.args[0], b, group)) && truthy(eval(e.args[1], b, group))
                              ? 1.0
                              : 0.0);
      case BK::kOr:
        return number_val(truthy(eval(e.args[0], b, group)) || truthy(eval(e.args[1], b, group))
                              ? 1.0
                              : 0.0);
      case BK::kNot: return number_val(truthy(eval(e.args[0], b, group)) ? 0.0 : 1.0);
    }
    return {};
  }

  // ---- output ----------------------------------------------------------------

  std::vector<Cell> order_values(const std::vector<Cell>& row, const Binding& b,
                                 const std::vector<Binding>* group) {
    std::vector<Cell> keys;
    for (const OrderKey& k : order_) {
      keys.push_back(k.by_projection ? row[k.projection] : eval(k.expr, b, group).cell);
    }
    return keys;
  }

  void group_and_project(QueryResult& result, std::vector<std::vector<Cell>>& keys) {
    std::vector<std::vector<Binding>> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (const Binding& b : bindings_) {
      std::string k;
      for (const BExpr& g : group_) {
        k += cell_key(eval(g, b, nullptr).cell);
        k.push_back('\x1f');
      }
      auto [it, inserted] = index.emplace(k, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(b);
    }
    for (const auto& g : groups) {
      std::vector<Cell> row;
      for (const BExpr& p : proj_) row.push_back(eval(p, g.front(), &g).cell);
      keys.push_back(order_values(row, g.front(), &g));
      result.rows.push_back(std::move(row));
    }
  }

  void sort_and_limit(QueryResult& result, std::vector<std::vector<Cell>>& keys) {
    if (!order_.empty()) {
      std::vector<std::size_t> idx(result.rows.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t k = 0; k < order_.size(); ++k) {
          const Cell& x = keys[a][k];
          const Cell& y = keys[b][k];
          int c = compare_cells(x, y);
          if (c != 0 && order_[k].descending && !is_missing(x) && !is_missing(y)) c = -c;
          if (c != 0) return c < 0;
        }
        return false;
      });
      std::vector<std::vector<Cell>> sorted;
      sorted.reserve(idx.size());
      for (std::size_t i : idx) sorted.push_back(std::move(result.rows[i]));
      result.rows = std::move(sorted);
    }
    if (q_.limit && result.rows.size() > *q_.limit) result.rows.resize(*q_.limit);
  }

  const Query& q_;
  const Catalog& cat_;
  const ExecOptions& opt_;

  std::vector<TableSource> tables_;
  std::vector<std::string> vars_;
  std::vector<BExpr> proj_;
  std::vector<std::string> headers_;
  std::vector<std::string> display_;
  std::vector<std::string> aliases_;
  std::optional<BExpr> where_;
  std::vector<BExpr> group_;
  std::vector<OrderKey> order_;
  bool grouped_ = false;
  bool existential_ = true;

  std::vector<const BExpr*> domains_;
  std::vector<std::vector<const BExpr*>> checks_;
  std::vector<std::vector<char>> allowed_;
  std::vector<Binding> bindings_;
  std::unordered_map<std::string, double> memo_;
  std::unordered_map<std::size_t, std::vector<std::string>> table_token_cache_;
};

std::string display_cell(const Cell& c, bool fixed) {
  if (is_missing(c)) return "NULL";
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  const double v = std::get<double>(c);
  if (v == std::floor(v) && std::fabs(v) < 1e15) return util::format_fixed(v, 0);
  return fixed ? util::format_fixed(v, 6) : util::format_double(v);
}

}  // namespace

QueryResult execute(const Query& query, const Catalog& catalog, const ExecOptions& options) {
  return Executor(query, catalog, options).run();
}

QueryResult run_query(std::string_view sql, const Catalog& catalog, const ExecOptions& options) {
  const Query q = parse(sql);
  if (!has_relational_variables(q)) return execute(q, catalog, options);

  for (const SelectItem& s : q.select) {
    if (s.star) {
      throw Error(ErrorCode::kType, "SELECT * cannot be combined with relational variables");
    }
  }
  const std::vector<Expansion> expansions = expand_relational_variables(q, catalog);
  QueryResult out;
  for (const SelectItem& s : q.select) {
    out.columns.push_back(s.alias.empty() ? to_string(s.expr) : s.alias);
  }
  const std::size_t data_cols = out.columns.size();
  out.columns.push_back("_table");
  out.columns.push_back("_column");
  std::unordered_set<std::string> seen;
  for (const Expansion& x : expansions) {
    QueryResult r = execute(x.query, catalog, options);
    for (auto& row : r.rows) {
      if (!seen.insert(row_key(row, data_cols)).second) continue;
      row.resize(data_cols);
      row.push_back(Cell{x.table});
      row.push_back(Cell{util::join(x.columns, ",")});
      out.rows.push_back(std::move(row));
    }
  }
  if (options.stats) options.stats->expansions = expansions.size();

  // Re-sort the union when every ORDER BY key names an output column.
  std::vector<std::pair<std::size_t, bool>> keys;
  for (const OrderItem& o : q.order_by) {
    const std::string text = to_string(o.expr);
    bool found = false;
    for (std::size_t i = 0; i < data_cols && !found; ++i) {
      if (util::iequals(out.columns[i], text) ||
          (!q.select[i].alias.empty() && o.expr.kind == ExprKind::kColumn &&
           util::iequals(q.select[i].alias, o.expr.name))) {
        keys.push_back({i, o.descending});
        found = true;
      }
    }
    if (!found) {
      keys.clear();
      break;
    }
  }
  if (!keys.empty()) {
    std::stable_sort(out.rows.begin(), out.rows.end(), [&](const auto& a, const auto& b) {
      for (auto [col, desc] : keys) {
        int c = compare_cells(a[col], b[col]);
        if (c != 0 && desc && !is_missing(a[col]) && !is_missing(b[col])) c = -c;
        if (c != 0) return c < 0;
      }
      return false;
    });
  }
  if (q.limit && out.rows.size() > *q.limit) out.rows.resize(*q.limit);
  return out;
}

std::string format_table(const QueryResult& result) {
  const std::size_t n = result.columns.size();
  std::vector<std::size_t> width(n);
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < n; ++c) width[c] = result.columns[c].size();
  for (const auto& row : result.rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < n; ++c) {
      line.push_back(display_cell(row[c], true));
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string out;
    for (std::size_t c = 0; c < n; ++c) {
      if (c) out += " | ";
      out += line[c];
      if (c + 1 < n) out.append(width[c] - line[c].size(), ' ');
    }
    return out + "\n";
  };
  std::string out = emit(result.columns);
  for (std::size_t c = 0; c < n; ++c) {
    if (c) out += "-+-";
    out.append(width[c], '-');
  }
  out += "\n";
  for (const auto& line : cells) out += emit(line);
  out += "(" + std::to_string(result.rows.size()) +
         (result.rows.size() == 1 ? " row)\n" : " rows)\n");
  return out;
}

std::string format_csv(const QueryResult& result) {
  std::vector<std::vector<std::string>> records;
  records.push_back(result.columns);
  for (const auto& row : result.rows) {
    std::vector<std::string> rec;
    for (const Cell& c : row) rec.push_back(is_missing(c) ? "" : display_cell(c, false));
    records.push_back(std::move(rec));
  }
  return write_csv(records);
}

std::string format_json_lines(const QueryResult& result) {
  std::string out;
  for (const auto& row : result.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
      const Cell& cell = row[c];
      if (is_missing(cell)) {
        obj[result.columns[c]] = nullptr;
      } else if (std::holds_alternative<double>(cell)) {
        obj[result.columns[c]] = std::get<double>(cell);
      } else {
        obj[result.columns[c]] = std::get<std::string>(cell);
      }
    }
    out += obj.dump() + "\n";
  }
  return out;
}

}  // namespace cogdb::query
