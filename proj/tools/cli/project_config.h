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

#ifndef COGDB_TOOLS_PROJECT_CONFIG_H_
#define COGDB_TOOLS_PROJECT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/embedding.h"
#include "cogdb/query/catalog.h"
#include "cogdb/row_cache.h"
#include "cogdb/word2vec_io.h"

namespace cogdb::cli {

struct TableSource {
  std::string name;
  std::filesystem::path csv;     // CSV-backed table
  std::filesystem::path schema;  // optional sidecar
  // Image-tag table: fixture responses or the live classify service.
  std::optional<std::filesystem::path> image_fixtures;
  bool image_service = false;
  std::vector<std::string> images;  // empty: everything the source lists
};

struct ForeignKeySpec {
  std::string table;
  std::string column;
  std::string references;
};

struct KbSource {
  std::filesystem::path path;
  int repetitions = 1;
};

struct ImageServiceConfig {
  std::string endpoint;
  std::filesystem::path image_dir;
  std::size_t max_image_bytes = 2u * 1024u * 1024u;
  int timeout_seconds = 30;
};

struct ProjectConfig {
  std::filesystem::path base_dir;
  std::vector<TableSource> tables;
  std::vector<ForeignKeySpec> foreign_keys;
  std::vector<KbSource> external_kb;
  TrainingConfig training;
  std::filesystem::path corpus = "corpus.txt";
  std::filesystem::path store = "store";
  ModelFormat model_format = ModelFormat::kWord2VecBinary;
  std::optional<std::filesystem::path> ext_store;  // separately trained external model
  std::size_t lsh_bits = 16;
  std::size_t kmeans_k = 0;  // 0: no k-means index
  int kmeans_iters = 50;
  std::uint64_t index_seed = 1;
  OovPolicy oov = OovPolicy::kError;
  std::optional<std::filesystem::path> stop_words;
  std::optional<ImageServiceConfig> image_service;

  // Relative paths resolve against the config file's directory. Input paths
  // must exist. Throws ConfigError, IoError.
  static ProjectConfig load(const std::filesystem::path& path);
  static ProjectConfig parse(std::string_view json_text, const std::filesystem::path& base_dir);

  std::filesystem::path layout_path() const;
  StopWords load_stop_words() const;
};

// Loads every configured table into a catalog (encoders fitted per table).
query::Catalog load_catalog(const ProjectConfig& cfg);

}  // namespace cogdb::cli

#endif  // COGDB_TOOLS_PROJECT_CONFIG_H_
