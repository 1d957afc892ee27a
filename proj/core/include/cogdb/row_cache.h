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

#ifndef COGDB_ROW_CACHE_H_
#define COGDB_ROW_CACHE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/embedding.h"
#include "cogdb/table.h"
#include "cogdb/textify.h"

namespace cogdb {

// What to do with tokens the model has never seen.
//  kError: unknown tokens are skipped, but a list with no known token raises
//          AllTokensUnknown.
//  kSkipWithDefault: unknown tokens are skipped; a list with no known token
//          resolves to the `</s>` vector.
enum class OovPolicy { kError, kSkipWithDefault };

std::string_view oov_policy_name(OovPolicy policy);
std::optional<OovPolicy> parse_oov_policy(std::string_view name);

using Vec = std::vector<double>;

Vec to_vec(std::span<const float> v);

// Componentwise mean of the known tokens' vectors (not re-normalized).
// `skipped`, when given, receives the number of unknown tokens.
Vec average_tokens(const std::vector<std::string>& tokens, const EmbeddingModel& model,
                   OovPolicy policy, std::size_t* skipped = nullptr);

// avgColVec per (table, row key, column).
class RowAttributeCache {
 public:
  using ColumnVectors = std::map<std::string, Vec>;
  using RowKey = std::pair<std::string, std::string>;  // (table, row key)

  RowAttributeCache() = default;
  explicit RowAttributeCache(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t num_rows() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void put(const std::string& table, const std::string& row_key, const std::string& column,
           Vec vec);

  // Table may be empty, in which case the first table holding `row_key` wins.
  const ColumnVectors* row(std::string_view table, std::string_view row_key) const;
  const Vec* get(std::string_view table, std::string_view row_key,
                 std::string_view column) const;

  const std::map<RowKey, ColumnVectors>& rows() const { return rows_; }

  // Identifies the model configuration the cache was computed from.
  const std::string& config_hash() const { return config_hash_; }
  void set_config_hash(std::string hash) { config_hash_ = std::move(hash); }

  bool operator==(const RowAttributeCache& other) const = default;

 private:
  std::size_t dim_ = 0;
  std::map<RowKey, ColumnVectors> rows_;
  std::string config_hash_;
};

// One entry per row and non-key column; keys and column names are stored as
// tokens (lowercase). Unknown tokens are handled per `policy`.
RowAttributeCache build_row_attribute_cache(const RelationalTable& table,
                                            const TableEncoders& encoders,
                                            const EmbeddingModel& model, OovPolicy policy,
                                            const StopWords& stop_words = StopWords::english());

// Adds `table`'s rows to an existing cache.
void extend_row_attribute_cache(RowAttributeCache& cache, const RelationalTable& table,
                                const TableEncoders& encoders, const EmbeddingModel& model,
                                OovPolicy policy,
                                const StopWords& stop_words = StopWords::english());

// Binary form: magic "CGDBRAC", u32 version, config hash, dim, rows.
std::string serialize_row_cache(const RowAttributeCache& cache);
RowAttributeCache parse_row_cache(std::string_view bytes);

}  // namespace cogdb

#endif  // COGDB_ROW_CACHE_H_
