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

#include "cogdb/query/relvars.h"

#include <algorithm>
#include <functional>

#include "cogdb/error.h"
#include "cogdb/util/strings.h"

namespace cogdb::query {

namespace {

void visit(Query& q, const std::function<void(Expr&)>& fn) {
  std::function<void(Expr&)> walk = [&](Expr& e) {
    fn(e);
    for (Expr& a : e.args) walk(a);
  };
  for (SelectItem& s : q.select) walk(s.expr);
  if (q.where) walk(*q.where);
  for (Expr& g : q.group_by) walk(g);
  for (OrderItem& o : q.order_by) walk(o.expr);
}

bool any_column_named(const Catalog& catalog, std::string_view name) {
  for (const auto& t : catalog.tables()) {
    if (t->table.column_index(name)) return true;
  }
  return false;
}

struct RelVar {
  std::string alias;
  std::vector<std::string> fixed;      // names that exist somewhere in the catalog
  std::vector<std::string> variables;  // column variables, first-appearance order
};

bool push_unique(std::vector<std::string>& v, const std::string& s) {
  for (const std::string& x : v) {
    if (util::iequals(x, s)) return false;
  }
  v.push_back(s);
  return true;
}

// One choice of table and columns for a single relational variable.
struct Choice {
  const CatalogTable* table = nullptr;
  std::vector<std::string> columns;  // parallel to RelVar::variables
};

std::vector<Choice> choices_for(const RelVar& rv, const Catalog& catalog) {
  std::vector<Choice> out;
  for (const auto& t : catalog.tables()) {
    const RelationalTable& table = t->table;
    bool ok = true;
    for (const std::string& f : rv.fixed) {
      if (!table.column_index(f)) ok = false;
    }
    if (!ok) continue;
    std::vector<std::string> candidates;
    for (std::size_t c = 0; c < table.num_columns(); ++c) {
      if (c == table.key_column()) continue;
      candidates.push_back(table.columns()[c].name);
    }
    std::vector<std::vector<std::string>> partial{{}};
    for (std::size_t v = 0; v < rv.variables.size(); ++v) {
      std::vector<std::vector<std::string>> next;
      for (const auto& p : partial) {
        for (const std::string& c : candidates) {
          auto q = p;
          q.push_back(c);
          next.push_back(std::move(q));
        }
      }
      partial = std::move(next);
    }
    for (auto& cols : partial) out.push_back({t.get(), std::move(cols)});
  }
  return out;
}

bool literal_kind_matches(const ColumnSchema& col, const Expr& lit) {
  const bool numeric_col = col.kind == ColumnKind::kNumeric;
  if (lit.kind == ExprKind::kNumber) return numeric_col;
  if (lit.kind == ExprKind::kString) return !numeric_col;
  return true;
}

}  // namespace

bool has_relational_variables(const Query& query) {
  for (const Source& s : query.from) {
    if (s.kind == Source::Kind::kRelVar) return true;
  }
  return false;
}

std::vector<Expansion> expand_relational_variables(const Query& query, const Catalog& catalog) {
  if (catalog.tables().empty()) {
    throw Error(ErrorCode::kNoValidSubstitution, "no tables are loaded");
  }
  std::vector<RelVar> vars;
  for (const Source& s : query.from) {
    if (s.kind == Source::Kind::kRelVar) vars.push_back({s.alias, {}, {}});
  }
  Query scan = query;
  visit(scan, [&](Expr& e) {
    if (e.kind != ExprKind::kColumn || e.qualifier.empty()) return;
    for (RelVar& rv : vars) {
      if (!util::iequals(rv.alias, e.qualifier)) continue;
      if (any_column_named(catalog, e.name)) {
        push_unique(rv.fixed, e.name);
      } else {
        push_unique(rv.variables, e.name);
      }
    }
  });

  std::vector<std::vector<Choice>> per_var;
  for (const RelVar& rv : vars) per_var.push_back(choices_for(rv, catalog));

  std::vector<Expansion> out;
  std::vector<std::size_t> pick(vars.size(), 0);
  bool exhausted = std::any_of(per_var.begin(), per_var.end(),
                               [](const auto& c) { return c.empty(); });
  while (!exhausted) {
    Expansion x;
    x.query = query;
    std::vector<std::string> table_names;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      const Choice& ch = per_var[v][pick[v]];
      table_names.push_back(ch.table->table.name());
      x.columns.insert(x.columns.end(), ch.columns.begin(), ch.columns.end());
    }
    x.table = util::join(table_names, ",");

    std::size_t rv_index = 0;
    for (Source& s : x.query.from) {
      if (s.kind != Source::Kind::kRelVar) continue;
      s.kind = Source::Kind::kTable;
      s.name = per_var[rv_index][pick[rv_index]].table->table.name();
      ++rv_index;
    }

    // Substitute column variables and type-check literal comparisons.
    bool valid = true;
    auto column_of = [&](const Expr& e) -> const ColumnSchema* {
      if (e.kind != ExprKind::kColumn) return nullptr;
      for (std::size_t v = 0; v < vars.size(); ++v) {
        if (!util::iequals(vars[v].alias, e.qualifier)) continue;
        const RelationalTable& t = per_var[v][pick[v]].table->table;
        auto c = t.column_index(e.name);
        return c ? &t.columns()[*c] : nullptr;
      }
      return nullptr;
    };
    visit(x.query, [&](Expr& e) {
      if (e.kind != ExprKind::kColumn) return;
      for (std::size_t v = 0; v < vars.size(); ++v) {
        if (!util::iequals(vars[v].alias, e.qualifier)) continue;
        for (std::size_t i = 0; i < vars[v].variables.size(); ++i) {
          if (util::iequals(vars[v].variables[i], e.name)) {
            e.name = per_var[v][pick[v]].columns[i];
            break;
          }
        }
      }
    });
    visit(x.query, [&](Expr& e) {
      if (e.kind != ExprKind::kCompare) return;
      for (int side = 0; side < 2; ++side) {
        const ColumnSchema* col = column_of(e.args[side]);
        if (col && !literal_kind_matches(*col, e.args[1 - side])) valid = false;
      }
    });
    if (valid) out.push_back(std::move(x));

    std::size_t v = 0;
    for (; v < vars.size(); ++v) {
      if (++pick[v] < per_var[v].size()) break;
      pick[v] = 0;
    }
    if (v == vars.size()) exhausted = true;
  }
  if (out.empty()) {
    throw Error(ErrorCode::kNoValidSubstitution,
                "no table/column substitution type-checks for the relational variables");
  }
  return out;
}

}  // namespace cogdb::query
