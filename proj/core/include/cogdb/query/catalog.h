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

#ifndef COGDB_QUERY_CATALOG_H_
#define COGDB_QUERY_CATALOG_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/table.h"
#include "cogdb/textify.h"

namespace cogdb::query {

// A loaded table with its fitted encoders and per-cell tokens, the same
// tokens the training corpus carries.
struct CatalogTable {
  RelationalTable table;
  TableEncoders encoders;
  std::vector<std::vector<std::vector<std::string>>> tokens;  // [row][column]
};

class Catalog {
 public:
  explicit Catalog(const StopWords& stop_words = StopWords::english());

  // Fits encoders when none are given. Throws SchemaError on a duplicate
  // table name.
  const CatalogTable& add(RelationalTable table);
  const CatalogTable& add(RelationalTable table, TableEncoders encoders);

  // Case-insensitive; nullptr when absent.
  const CatalogTable* find(std::string_view name) const;
  const std::vector<std::unique_ptr<CatalogTable>>& tables() const { return tables_; }
  const StopWords& stop_words() const { return stop_words_; }

 private:
  StopWords stop_words_;
  std::vector<std::unique_ptr<CatalogTable>> tables_;
};

}  // namespace cogdb::query

#endif  // COGDB_QUERY_CATALOG_H_
