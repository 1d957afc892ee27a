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

#include "support/query_oracles.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "cogdb/csv.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/strings.h"
#include "support/oracles.h"
#include "support/test_models.h"

namespace cogdb::oracle {
namespace {

query::Catalog fixture_catalog() {
  query::Catalog c;
  for (const char* name : {"sales", "emp", "dept"}) {
    c.add(load_csv_table(testing::fixture_path(std::string(name) + ".csv"),
                         testing::fixture_path(std::string(name) + ".schema.json")));
  }
  return c;
}

std::vector<std::string> kb_lines() {
  return util::split(util::read_file(testing::fixture_path("custom_kb.txt")), '\n');
}

const query::CatalogTable& table(const QueryWorld& w, const char* name) {
  return *w.catalog.find(name);
}

std::size_t col(const query::CatalogTable& t, const char* name) {
  return *t.table.column_index(name);
}

double prox(const QueryWorld& w, const std::vector<std::string>& a,
            const std::vector<std::string>& b) {
  return cos(avg_tokens(w.model, a), avg_tokens(w.model, b));
}

std::vector<std::string> row_tokens(const query::CatalogTable& t, std::size_t r) {
  std::vector<std::string> out;
  for (const auto& cell : t.tokens[r]) out.insert(out.end(), cell.begin(), cell.end());
  return out;
}

void sort_desc(ORows& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ORow& a, const ORow& b) { return a.score > b.score; });
}

bool cell_eq(const Cell& a, const Cell& b, double tol) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<double>(a)) {
    return std::abs(std::get<double>(a) - std::get<double>(b)) <= tol;
  }
  return a == b;
}

std::string show(const std::vector<Cell>& row) {
  std::string out;
  for (const Cell& c : row) {
    if (!out.empty()) out += " | ";
    out += is_missing(c) ? "NULL" : cell_to_string(c);
  }
  return out;
}

}  // namespace

QueryWorld random_world(std::size_t dim, std::uint64_t seed) {
  QueryWorld w{fixture_catalog(), {}};
  std::set<std::string> vocab;
  for (const auto& t : w.catalog.tables()) {
    for (const auto& row : t->tokens) {
      for (const auto& cell : row) vocab.insert(cell.begin(), cell.end());
    }
  }
  for (const std::string& line : kb_lines()) {
    for (const std::string& tok : normalize_free_text(line)) vocab.insert(tok);
  }
  vocab.insert("merchant_y");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::pair<std::string, std::vector<float>>> rows;
  rows.push_back({"</s>", {}});
  for (const std::string& t : vocab) rows.push_back({t, {}});
  for (auto& [tok, v] : rows) {
    for (std::size_t i = 0; i < dim; ++i) v.push_back(static_cast<float>(normal(rng)));
  }
  w.model = testing::make_model(rows, true);
  return w;
}

QueryWorld trained_world() {
  QueryWorld w{fixture_catalog(), {}};
  const auto& sales = table(w, "sales");
  auto corpus = textify_table(sales.table, sales.encoders);
  corpus = append_external_kb(std::move(corpus), kb_lines(), 2);
  TrainingConfig cfg;
  cfg.dimension = 16;
  cfg.window = 12;
  cfg.negative_samples = 5;
  cfg.subsample_threshold = 0.0;
  cfg.epochs = 30;
  cfg.seed = 5;
  w.model = train(corpus, cfg);
  return w;
}

std::string similarity_sql(const std::string& thr) {
  return "SELECT X.custID, Y.custID, similarityUDF(X.Items, Y.Items) AS similarity\n"
         "FROM sales X, sales Y\n"
         "WHERE similarityUDF(X.Items, Y.Items) > " + thr + "\n"
         "ORDER BY similarity DESC";
}

std::vector<double> similarity_scores(const QueryWorld& w) {
  const auto& t = table(w, "sales");
  const std::size_t items = col(t, "Items");
  std::vector<double> out;
  for (std::size_t x = 0; x < t.table.num_rows(); ++x) {
    for (std::size_t y = 0; y < t.table.num_rows(); ++y) {
      out.push_back(prox(w, t.tokens[x][items], t.tokens[y][items]));
    }
  }
  return out;
}

ORows similarity_join(const QueryWorld& w, double thr) {
  const auto& t = table(w, "sales");
  const std::size_t items = col(t, "Items");
  const std::size_t key = col(t, "custID");
  ORows out;
  for (std::size_t x = 0; x < t.table.num_rows(); ++x) {
    for (std::size_t y = 0; y < t.table.num_rows(); ++y) {
      const double s = prox(w, t.tokens[x][items], t.tokens[y][items]);
      if (s > thr) out.push_back({{t.table.rows()[x][key], t.table.rows()[y][key], Cell{s}}, s});
    }
  }
  sort_desc(out);
  return out;
}

std::string prediction_sql(const std::string& thr, std::size_t limit) {
  return "SELECT X.custID, similarityUDF(X.Items, 'listeria') AS similarity\n"
         "FROM sales X\n"
         "WHERE similarityUDF(X.Items, 'listeria') > " + thr + "\n"
         "ORDER BY similarity DESC\n"
         "LIMIT " + std::to_string(limit);
}

std::vector<double> prediction_scores(const QueryWorld& w) {
  const auto& t = table(w, "sales");
  const std::size_t items = col(t, "Items");
  std::vector<double> out;
  for (std::size_t x = 0; x < t.table.num_rows(); ++x) {
    out.push_back(prox(w, t.tokens[x][items], {"listeria"}));
  }
  return out;
}

ORows prediction(const QueryWorld& w, double thr, std::size_t limit) {
  const auto& t = table(w, "sales");
  const std::size_t items = col(t, "Items");
  const std::size_t key = col(t, "custID");
  ORows out;
  for (std::size_t x = 0; x < t.table.num_rows(); ++x) {
    const double s = prox(w, t.tokens[x][items], {"listeria"});
    if (s > thr) out.push_back({{t.table.rows()[x][key], Cell{s}}, s});
  }
  sort_desc(out);
  if (out.size() > limit) out.resize(limit);
  return out;
}

std::string olap_sql(const std::string& thr) {
  return "SELECT X.Category, MAX(X.Amount)\n"
         "FROM sales X\n"
         "WHERE similarityUDF('Merchant_Y', X.Merchant) > " + thr + "\n"
         "GROUP BY X.Category";
}

std::vector<double> olap_scores(const QueryWorld& w) {
  const auto& t = table(w, "sales");
  const std::size_t merchant = col(t, "Merchant");
  std::vector<double> out;
  for (std::size_t x = 0; x < t.table.num_rows(); ++x) {
    out.push_back(prox(w, {"merchant_y"}, t.tokens[x][merchant]));
  }
  return out;
}

ORows olap(const QueryWorld& w, double thr) {
  const auto& t = table(w, "sales");
  const std::size_t merchant = col(t, "Merchant");
  const std::size_t category = col(t, "Category");
  const std::size_t amount = col(t, "Amount");
  std::vector<std::string> order;
  std::vector<double> best;
  for (std::size_t x = 0; x < t.table.num_rows(); ++x) {
    if (!(prox(w, {"merchant_y"}, t.tokens[x][merchant]) > thr)) continue;
    const std::string cat = std::get<std::string>(t.table.rows()[x][category]);
    const double a = std::get<double>(t.table.rows()[x][amount]);
    auto it = std::find(order.begin(), order.end(), cat);
    if (it == order.end()) {
      order.push_back(cat);
      best.push_back(a);
    } else {
      double& b = best[static_cast<std::size_t>(it - order.begin())];
      b = std::max(b, a);
    }
  }
  ORows out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.push_back({{Cell{order[i]}, Cell{best[i]}}, std::nan("")});
  }
  return out;
}

std::string entity_sql(const std::string& thr) {
  return "SELECT EMP.Name, EMP.Salary, DEPT.Name\n"
         "FROM EMP, DEPT, Token e1, e2\n"
         "WHERE contains(EMP.Address, e1) AND\n"
         "contains(DEPT.*, e2) AND\n"
         "cosineDistance(e1, e2) > " + thr;
}

std::vector<double> entity_scores(const QueryWorld& w) {
  const auto& emp = table(w, "emp");
  const auto& dept = table(w, "dept");
  const std::size_t addr = col(emp, "Address");
  std::vector<double> out;
  for (std::size_t e = 0; e < emp.table.num_rows(); ++e) {
    for (std::size_t d = 0; d < dept.table.num_rows(); ++d) {
      double best = -2.0;
      for (const std::string& t1 : emp.tokens[e][addr]) {
        for (const std::string& t2 : row_tokens(dept, d)) best = std::max(best, prox(w, {t1}, {t2}));
      }
      out.push_back(best);
    }
  }
  return out;
}

ORows token_entities(const QueryWorld& w, double thr) {
  const auto& emp = table(w, "emp");
  const auto& dept = table(w, "dept");
  const std::size_t addr = col(emp, "Address");
  ORows out;
  for (std::size_t e = 0; e < emp.table.num_rows(); ++e) {
    for (std::size_t d = 0; d < dept.table.num_rows(); ++d) {
      bool hit = false;
      for (const std::string& t1 : emp.tokens[e][addr]) {
        for (const std::string& t2 : row_tokens(dept, d)) hit = hit || prox(w, {t1}, {t2}) > thr;
      }
      if (!hit) continue;
      out.push_back({{emp.table.rows()[e][col(emp, "Name")], emp.table.rows()[e][col(emp, "Salary")],
                      dept.table.rows()[d][col(dept, "Name")]},
                     std::nan("")});
    }
  }
  return out;
}

std::string median_threshold(std::vector<double> scores) {
  std::sort(scores.begin(), scores.end());
  const double m = scores[scores.size() / 2];
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << std::floor(m * 1000.0) / 1000.0;
  return os.str();
}

bool same_rows(const query::QueryResult& got, const ORows& want, double tol, double tie_tol,
               std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (got.rows.size() != want.size()) {
    return fail("row count " + std::to_string(got.rows.size()) + " != expected " +
                std::to_string(want.size()));
  }
  std::size_t i = 0;
  while (i < want.size()) {
    std::size_t end = i + 1;
    if (!std::isnan(want[i].score)) {
      while (end < want.size() && !std::isnan(want[end].score) &&
             std::abs(want[end].score - want[i].score) <= tie_tol) {
        ++end;
      }
    }
    std::vector<bool> used(end - i, false);
    for (std::size_t g = i; g < end; ++g) {
      bool matched = false;
      for (std::size_t k = i; k < end && !matched; ++k) {
        if (used[k - i] || want[k].cells.size() != got.rows[g].size()) continue;
        bool eq = true;
        for (std::size_t c = 0; c < want[k].cells.size() && eq; ++c) {
          eq = cell_eq(got.rows[g][c], want[k].cells[c], tol);
        }
        if (eq) {
          used[k - i] = true;
          matched = true;
        }
      }
      if (!matched) {
        return fail("row " + std::to_string(g) + " [" + show(got.rows[g]) +
                    "] not expected here; expected [" + show(want[g].cells) + "]");
      }
    }
    i = end;
  }
  return true;
}

}  // namespace cogdb::oracle
