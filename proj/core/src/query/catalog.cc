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

#include "cogdb/query/catalog.h"

#include "cogdb/error.h"
#include "cogdb/util/strings.h"

namespace cogdb::query {

Catalog::Catalog(const StopWords& stop_words) : stop_words_(stop_words) {}

const CatalogTable& Catalog::add(RelationalTable table) {
  TableEncoders encoders = fit_table_encoders(table);
  return add(std::move(table), std::move(encoders));
}

const CatalogTable& Catalog::add(RelationalTable table, TableEncoders encoders) {
  if (find(table.name())) {
    throw Error(ErrorCode::kSchema, "table '" + table.name() + "' is already loaded");
  }
  auto entry = std::make_unique<CatalogTable>();
  entry->table = std::move(table);
  entry->encoders = std::move(encoders);
  const RelationalTable& t = entry->table;
  entry->tokens.resize(t.num_rows());
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    entry->tokens[r].resize(t.num_columns());
    for (std::size_t c = 0; c < t.num_columns(); ++c) {
      entry->tokens[r][c] = cell_tokens(t, entry->encoders, r, c, stop_words_);
    }
  }
  tables_.push_back(std::move(entry));
  return *tables_.back();
}

const CatalogTable* Catalog::find(std::string_view name) const {
  for (const auto& t : tables_) {
    if (util::iequals(t->table.name(), name)) return t.get();
  }
  return nullptr;
}

}  // namespace cogdb::query
