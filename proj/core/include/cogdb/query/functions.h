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

#ifndef COGDB_QUERY_FUNCTIONS_H_
#define COGDB_QUERY_FUNCTIONS_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/embedding.h"
#include "cogdb/row_cache.h"
#include "cogdb/udf.h"

namespace cogdb::query {

// One evaluated argument: the tokens a cell or literal stands for, plus its
// numeric value when it has one.
struct UdfArg {
  std::vector<std::string> tokens;
  std::optional<double> number;
};

struct UdfEnv {
  const EmbeddingModel* model = nullptr;
  const EmbeddingModel* ext_model = nullptr;  // falls back to `model`
  const RowAttributeCache* cache = nullptr;
  OovPolicy oov = OovPolicy::kSkipWithDefault;
  double epsilon = kDefaultEpsilon;
};

enum class FunctionKind { kUdf, kAggregate, kContains };

// How a UDF's constant arguments define a query vector for candidate
// pruning; kNone means the function is never pruned.
enum class PruneShape {
  kNone,
  kAverage,        // cos(avg(constants), avg(column))
  kKeyCentroid,    // cos(mean of constant keys, column key)
};

struct FunctionSpec {
  std::string name;
  FunctionKind kind = FunctionKind::kUdf;
  int min_args = 0;
  int max_args = 0;  // -1: variadic
  std::string signature;
  PruneShape prune = PruneShape::kNone;
  int prune_candidate_arg = -1;  // kKeyCentroid: argument holding the candidate, -1 = last
  std::function<double(std::span<const UdfArg>, const UdfEnv&)> fn;
};

// Case-insensitive; nullptr when unknown.
const FunctionSpec* find_function(std::string_view name);
const std::vector<FunctionSpec>& function_registry();

}  // namespace cogdb::query

#endif  // COGDB_QUERY_FUNCTIONS_H_
