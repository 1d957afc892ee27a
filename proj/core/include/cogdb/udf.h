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

#ifndef COGDB_UDF_H_
#define COGDB_UDF_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cogdb/embedding.h"
#include "cogdb/row_cache.h"

namespace cogdb {

using Tokens = std::vector<std::string>;

// Throws ZeroVector when either side has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(std::span<const float> a, std::span<const float> b);

// Exact token membership.
int string_present(const Tokens& param_a, std::string_view param_b);

Vec avg_vector(const Tokens& tokens, const EmbeddingModel& model, OovPolicy policy);

double proximity_avg(const Tokens& a, const Tokens& b, const EmbeddingModel& model,
                     OovPolicy policy);

// Cosine between two single tokens (the entity-extension `cosineDistance`).
double token_cosine(std::string_view a, std::string_view b, const EmbeddingModel& model,
                    OovPolicy policy);

// Object-vector similarity of `candidate` to the mean of three input keys.
// Throws UnknownKey.
double combined_avg_sim(std::string_view candidate, std::string_view in1, std::string_view in2,
                        std::string_view in3, const EmbeddingModel& model);

// Vector counts actually averaged by attribute_sim_avg.
struct AttributeTrace {
  std::size_t input_vectors = 0;
  std::size_t candidate_vectors = 0;
};

// Columns averaged for inputs and candidate per flag:
//   1: classB, classC vs classB, classC
//   2: classB, classC vs classD
//   3: classB, classC, classD vs the same
//   4: classB, classC, classD vs the candidate's object vector
// Throws UnknownKey, InvalidFlag.
double attribute_sim_avg(std::string_view in1, std::string_view in2, std::string_view in3,
                         std::string_view candidate, int flag, const RowAttributeCache& cache,
                         const EmbeddingModel& model, std::string_view table = {},
                         AttributeTrace* trace = nullptr);

enum class AnalogyMethod { kCosAdd = 1, kPairDirection = 2, kCosMul = 3 };

inline constexpr double kDefaultEpsilon = 0.001;

// Throws InvalidFlag for anything outside 1..3.
AnalogyMethod analogy_method_from_flag(int flag);
std::string_view analogy_method_name(AnalogyMethod method);

// x : y :: q : w.
//   COSADD        cos(w, q + y - x)
//   PAIRDIRECTION cos(w - q, y - x)
//   COSMUL        s(w,q) s(w,y) / (s(w,x) + eps), s(c) = (c + 1) / 2
// Throws ZeroVector, DegenerateDirection.
double analogy_score(std::span<const double> x, std::span<const double> y,
                     std::span<const double> q, std::span<const double> w,
                     AnalogyMethod method, double epsilon = kDefaultEpsilon);

// x = v(a), y = v(b), q = v(c), w = mean(d). Throws UnknownKey for a, b, c.
double analogy_query(std::string_view a, std::string_view b, std::string_view c,
                     const Tokens& d, int flag, const EmbeddingModel& model, OovPolicy policy,
                     double epsilon = kDefaultEpsilon);

// x = mean(v(a), v(c)), y = mean(v(b), v(d)), q = v(e), w = mean(f).
double analogy_sequence(std::string_view a, std::string_view b, std::string_view c,
                        std::string_view d, std::string_view e, const Tokens& f, int flag,
                        const EmbeddingModel& model, OovPolicy policy,
                        double epsilon = kDefaultEpsilon);

// cos(mean(inputs), v(candidate)). Throws UnknownKey.
double semantic_cluster_score(const Tokens& inputs, std::string_view candidate,
                              const EmbeddingModel& model);

struct ClusteredAnalogy {
  std::string source;
  std::vector<std::string> targets;
  bool operator==(const ClusteredAnalogy&) const = default;
};

// Sources: top `k_sources` vocabulary tokens by semantic_cluster_score
// against the input sources (inputs excluded). Targets for each source s:
// top `k_targets` by COSMUL with x = mean(sources), y = mean(targets), q = s,
// excluding the tokens behind x, y and q. `candidates`, when non-empty,
// restricts both searches. Ties go to the lexicographically smaller token.
std::vector<ClusteredAnalogy> clustered_analogies(
    const std::vector<std::pair<std::string, std::string>>& pairs, std::size_t k_sources,
    std::size_t k_targets, const EmbeddingModel& model,
    const std::vector<std::string>& candidates = {}, double epsilon = kDefaultEpsilon);

// Item with the lowest mean cosine to the others. Needs >= 3 items.
std::string odd_man_out(const Tokens& items, const EmbeddingModel& model);

// `CONCEPT_` + first byte uppercased.
std::string concept_token(std::string_view token);
std::string capitalize_first(std::string_view token);

// Each token t of param_b resolves to CONCEPT_<T>, or `</s>` when absent.
// Throws UnknownConcept.
double proximity_avg_for_ext_kb(std::string_view concept_name, const Tokens& param_b,
                                const EmbeddingModel& ext_model);

// As above, but when both CONCEPT_<T> and t exist their mean is used.
double proximity_avg_adv_for_ext_kb(std::string_view concept_name, const Tokens& param_b,
                                    const EmbeddingModel& ext_model);

}  // namespace cogdb

#endif  // COGDB_UDF_H_
