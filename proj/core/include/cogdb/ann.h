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

#ifndef COGDB_ANN_H_
#define COGDB_ANN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cogdb/embedding.h"
#include "cogdb/udf.h"

namespace cogdb {

// Dot product of every model vector with `query`, accumulated in double.
// Throws DimensionMismatch.
std::vector<double> batch_scores(std::span<const double> query, const EmbeddingModel& model);

// Sign-random-projection signatures, one bit per hyperplane.
struct LshIndex {
  int bits = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::vector<double> planes;             // bits x dim, row-major
  std::vector<std::uint64_t> signatures;  // per vocabulary index
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;

  std::uint64_t signature(std::span<const double> v) const;
  std::uint64_t signature(std::span<const float> v) const;
  void rebuild_buckets();
};

inline constexpr int kDefaultLshBits = 16;

// Planes are i.i.d. standard normal draws from SplitMix64(seed). Needs
// 1 <= bits <= 64.
LshIndex build_lsh(const EmbeddingModel& model, int bits = kDefaultLshBits,
                   std::uint64_t seed = 1);

int hamming_distance(std::uint64_t a, std::uint64_t b);

// Vocabulary indices whose signature lies within `radius` (0..2) of the
// query's, ascending.
std::vector<std::size_t> lsh_candidates(const LshIndex& index, std::span<const double> query,
                                        int radius);

struct SphericalKMeansIndex {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  std::vector<double> centroids;            // k x dim, unit rows
  std::vector<std::uint32_t> assignment;    // per vocabulary index
  std::vector<double> objective_history;    // sum of cos(v, centroid(v)) per iteration
  int iterations = 0;

  std::span<const double> centroid(std::size_t c) const {
    return {centroids.data() + c * dim, dim};
  }
  std::vector<std::vector<std::uint32_t>> members() const;
};

// Seeds with k distinct tokens drawn by SplitMix64(seed), then alternates
// max-cosine assignment and normalized-mean update until no assignment
// changes or `max_iters` updates ran. A cluster left empty takes the token
// farthest from its own centroid among clusters with two or more members.
// Throws InvalidK unless 1 <= k <= vocabulary size.
SphericalKMeansIndex spherical_kmeans(const EmbeddingModel& model, std::size_t k,
                                      int max_iters = 50, std::uint64_t seed = 1);

struct Strategy {
  enum class Kind { kExact, kLsh, kKMeans };
  Kind kind = Kind::kExact;
  int radius = 2;   // lsh
  int n_probe = 1;  // kmeans

  static Strategy exact() { return {}; }
  static Strategy lsh(int radius) { return {Kind::kLsh, radius, 1}; }
  static Strategy kmeans(int n_probe) { return {Kind::kKMeans, 2, n_probe}; }

  // "exact", "lsh:R", "kmeans:N". Throws ConfigError.
  static Strategy parse(std::string_view text);
  std::string to_string() const;
  bool operator==(const Strategy&) const = default;
};

struct AnnIndexSet {
  const LshIndex* lsh = nullptr;
  const SphericalKMeansIndex* kmeans = nullptr;
};

struct TopKEntry {
  std::string token;
  double score = 0.0;
  std::size_t index = 0;
  bool operator==(const TopKEntry&) const = default;
};

struct TopKResult {
  std::vector<TopKEntry> entries;
  bool exact = true;
  std::size_t candidates_scored = 0;
};

// Vocabulary indices a strategy would score for `query`: everything for
// exact, an LSH neighborhood, or the members of the n_probe nearest
// centroids.
std::vector<std::size_t> candidate_indices(std::span<const double> query,
                                           const EmbeddingModel& model, const Strategy& strategy,
                                           const AnnIndexSet& indices);

// Cosine ranking of the vocabulary against `query`; `</s>` and `excluded`
// never appear. Approximate strategies score their candidate set exactly.
// Ties go to the lexicographically smaller token.
TopKResult top_k(std::span<const double> query, std::size_t k, const EmbeddingModel& model,
                 const Strategy& strategy = {}, const AnnIndexSet& indices = {},
                 const std::unordered_set<std::string>& excluded = {});

// Best w for x : y :: q : w over the vocabulary, excluding the tokens named
// in `excluded` (typically x, y and q). Exact mode scores all candidates with
// matrix-vector products.
TopKResult solve_analogy(std::span<const double> x, std::span<const double> y,
                         std::span<const double> q, AnalogyMethod method, std::size_t k,
                         const EmbeddingModel& model, const Strategy& strategy = {},
                         const AnnIndexSet& indices = {},
                         const std::unordered_set<std::string>& excluded = {},
                         double epsilon = kDefaultEpsilon);

// crc32 over vocabulary and vectors; ties an index file to its model.
std::uint32_t model_fingerprint(const EmbeddingModel& model);

// Index files: magic "CGDBIDX", version, type, seed, parameters, payload.
std::string serialize_lsh(const LshIndex& index, std::uint32_t fingerprint);
std::string serialize_kmeans(const SphericalKMeansIndex& index, std::uint32_t fingerprint);

struct LoadedIndex {
  std::optional<LshIndex> lsh;
  std::optional<SphericalKMeansIndex> kmeans;
  std::uint32_t fingerprint = 0;
};
// Throws FormatError, VersionMismatch.
LoadedIndex parse_index(std::string_view bytes);

}  // namespace cogdb

#endif  // COGDB_ANN_H_
