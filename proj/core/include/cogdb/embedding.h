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

#ifndef COGDB_EMBEDDING_H_
#define COGDB_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cogdb/textify.h"

namespace cogdb {

inline constexpr std::string_view kSentinelToken = "</s>";

enum class Architecture { kCbow, kSkipGram };

struct TrainingConfig {
  int dimension = 300;
  int window = 12;
  int negative_samples = 16;
  double subsample_threshold = 1e-4;
  int min_count = 0;
  int epochs = 17;
  Architecture architecture = Architecture::kCbow;
  bool circular_window = true;
  bool uniform_influence = true;
  bool pk_always_neighbor = false;
  // Keyed by "table.column" or bare column token; unlisted columns weigh 1.
  std::map<std::string, double> column_weights;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
  int threads = 1;
  // Accepted for compatibility with word2vec-style command lines; they
  // change nothing here.
  int cbuffer = 1;
  int eweight = 1;
  bool binary_output = true;

  // Throws ConfigError.
  void validate() const;

  // word2vec-style flag string, e.g. "-size 300 -window 12 ...".
  std::string parameter_string() const;

  static TrainingConfig from_json(std::string_view json_text);
  std::string to_json() const;
};

// Vocabulary plus one d-dimensional vector per token, row-major.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(std::vector<std::string> vocab, std::vector<float> vectors,
                 std::size_t dim);

  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return dim_; }
  bool normalized() const { return normalized_; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::string& token(std::size_t index) const { return vocab_[index]; }
  std::optional<std::size_t> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }

  std::span<const float> vector(std::size_t index) const {
    return {vectors_.data() + index * dim_, dim_};
  }
  std::span<float> mutable_vector(std::size_t index) {
    return {vectors_.data() + index * dim_, dim_};
  }
  std::optional<std::span<const float>> lookup(std::string_view token) const;

  const std::vector<float>& data() const { return vectors_; }

  // Token frequencies seen during training (zero for loaded models).
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  void set_counts(std::vector<std::uint64_t> counts);

  // Output-layer weights kept for incremental training; empty for loaded
  // models.
  const std::vector<float>& output_weights() const { return output_weights_; }
  void set_output_weights(std::vector<float> weights);

  // Appends `token` with the given vector; returns its index.
  std::size_t add_token(std::string token, std::span<const float> vec);

  // Scales every vector to unit L2 norm. Vectors already within 1e-6 of unit
  // norm are left bit-identical; a zero vector becomes the first basis vector.
  void normalize();

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> vectors_;
  std::vector<std::uint64_t> counts_;
  std::vector<float> output_weights_;
  std::size_t dim_ = 0;
  bool normalized_ = false;
};

struct Vocabulary {
  std::vector<std::string> tokens;        // index 0 is `</s>`
  std::vector<std::uint64_t> counts;
  std::unordered_map<std::string, std::size_t> index;
};

// Tokens with frequency >= min_count (all of them when min_count is 0),
// ordered by descending count then token, preceded by `</s>`.
// Throws EmptyCorpus.
Vocabulary build_vocab(const std::vector<TokenSentence>& corpus,
                       const TrainingConfig& cfg);

struct ContextEntry {
  std::size_t position;  // index into the sentence
  float weight;          // column weight of the context token
};

struct WindowOptions {
  int window = 5;
  bool circular = false;
  bool uniform_influence = false;
};

// Positions acting as context for `center`: the classic window, optionally
// shrunk by `shrink` (ignored under uniform influence), wrapped around the
// sentence when circular, plus `key_position` when given. Duplicates and the
// center itself never appear.
std::vector<std::size_t> context_positions(std::size_t sentence_length,
                                           std::size_t center,
                                           const WindowOptions& options,
                                           int shrink = 0,
                                           std::optional<std::size_t> key_position = {});

// Called once per (sentence, center) during training with the enumerated
// context; used for instrumentation in tests.
using ContextObserver = std::function<void(std::size_t sentence_index,
                                           std::size_t center,
                                           std::span<const ContextEntry> context)>;

struct TrainOptions {
  ContextObserver observer;
};

EmbeddingModel train(const std::vector<TokenSentence>& corpus,
                     const TrainingConfig& cfg, const TrainOptions& options = {});

// Continues training `model` on `new_corpus`. Unseen tokens get fresh vectors;
// the result is re-normalized. Throws DimensionMismatch.
EmbeddingModel train_incremental(const EmbeddingModel& model,
                                 const std::vector<TokenSentence>& new_corpus,
                                 const TrainingConfig& cfg,
                                 const TrainOptions& options = {});

}  // namespace cogdb

#endif  // COGDB_EMBEDDING_H_
