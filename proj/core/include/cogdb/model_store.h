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

#ifndef COGDB_MODEL_STORE_H_
#define COGDB_MODEL_STORE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/ann.h"
#include "cogdb/embedding.h"
#include "cogdb/row_cache.h"
#include "cogdb/word2vec_io.h"

namespace cogdb {

inline constexpr int kStoreVersion = 1;
inline constexpr std::string_view kManifestName = "manifest.json";

struct StoreManifest {
  struct Artifact {
    std::string file;    // relative to the store directory
    std::string crc32;   // 8 hex digits
    std::string kind;    // index kind ("lsh", "kmeans"); empty otherwise
  };

  int version = kStoreVersion;
  Artifact model;
  ModelFormat model_format = ModelFormat::kWord2VecBinary;
  std::optional<Artifact> cache;
  std::vector<Artifact> indices;
  std::uint64_t seed = 0;
  std::string config_hash;

  std::string to_json() const;
  // Throws FormatError on malformed JSON, VersionMismatch on a newer version.
  static StoreManifest from_json(std::string_view text);
};

// crc32 of the canonical config JSON, as 8 hex digits.
std::string config_hash(const TrainingConfig& cfg);

// Writes the model (and cache when given) into `dir` with a fresh manifest.
// Existing index entries are dropped since they describe the old model.
void save_store(const std::filesystem::path& dir, const EmbeddingModel& model,
                ModelFormat format, std::uint64_t seed, const std::string& config_hash,
                const RowAttributeCache* cache = nullptr);

// Adds or replaces the index of the same kind in an existing store.
void add_index_to_store(const std::filesystem::path& dir, const LshIndex& index);
void add_index_to_store(const std::filesystem::path& dir, const SphericalKMeansIndex& index);

void save_row_cache(const RowAttributeCache& cache, const std::filesystem::path& path);
RowAttributeCache load_row_cache(const std::filesystem::path& path);

// An opened store: every artifact verified and memory-resident.
class ModelStore {
 public:
  // Throws Io, ChecksumMismatch, VersionMismatch, FormatError.
  static ModelStore open(const std::filesystem::path& dir);

  const StoreManifest& manifest() const { return manifest_; }
  const EmbeddingModel& model() const { return model_; }
  const RowAttributeCache* cache() const { return cache_ ? &*cache_ : nullptr; }
  AnnIndexSet indices() const;

  // Absent for unknown tokens; callers apply their OOV policy.
  std::optional<std::span<const float>> lookup(std::string_view token) const {
    return model_.lookup(token);
  }

  // Non-fatal findings from open(), e.g. a cache built under another config.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  StoreManifest manifest_;
  EmbeddingModel model_;
  std::optional<RowAttributeCache> cache_;
  std::optional<LshIndex> lsh_;
  std::optional<SphericalKMeansIndex> kmeans_;
  std::vector<std::string> warnings_;
};

}  // namespace cogdb

#endif  // COGDB_MODEL_STORE_H_
