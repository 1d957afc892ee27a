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

#include "cogdb/model_store.h"

#include <json.hpp>

#include "cogdb/error.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/log.h"

namespace cogdb {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json artifact_json(const StoreManifest::Artifact& a) {
  json j = {{"file", a.file}, {"crc32", a.crc32}};
  if (!a.kind.empty()) j["kind"] = a.kind;
  return j;
}

StoreManifest::Artifact artifact_from(const json& j) {
  StoreManifest::Artifact a;
  a.file = j.at("file").get<std::string>();
  a.crc32 = j.at("crc32").get<std::string>();
  if (j.contains("kind")) a.kind = j.at("kind").get<std::string>();
  if (a.file.empty() || fs::path(a.file).is_absolute() || a.file.find("..") != std::string::npos) {
    throw FormatError("manifest names an unsafe file '" + a.file + "'", 0);
  }
  return a;
}

std::string read_checked(const fs::path& dir, const StoreManifest::Artifact& a) {
  std::string bytes = util::read_file(dir / a.file);
  const std::string actual = util::hex32(util::crc32(bytes));
  if (actual != a.crc32) {
    throw Error(ErrorCode::kChecksumMismatch, (dir / a.file).string() + ": expected crc32 " +
                                                  a.crc32 + ", found " + actual);
  }
  return bytes;
}

StoreManifest::Artifact write_artifact(const fs::path& dir, const std::string& file,
                                       std::string_view bytes, std::string kind = {}) {
  util::write_file(dir / file, bytes);
  return {file, util::hex32(util::crc32(bytes)), std::move(kind)};
}

StoreManifest read_manifest(const fs::path& dir) {
  return StoreManifest::from_json(util::read_file(dir / kManifestName));
}

void write_manifest(const fs::path& dir, const StoreManifest& m) {
  util::write_file(dir / kManifestName, m.to_json());
}

void add_index(const fs::path& dir, const std::string& kind, const std::string& bytes) {
  StoreManifest m = read_manifest(dir);
  std::erase_if(m.indices, [&](const auto& a) { return a.kind == kind; });
  m.indices.push_back(write_artifact(dir, "index." + kind + ".bin", bytes, kind));
  write_manifest(dir, m);
}

std::uint32_t store_fingerprint(const fs::path& dir) {
  const StoreManifest m = read_manifest(dir);
  return model_fingerprint(parse_model(read_checked(dir, m.model), m.model_format));
}

}  // namespace

std::string StoreManifest::to_json() const {
  json j;
  j["version"] = version;
  j["model"] = artifact_json(model);
  j["model"]["format"] = std::string(model_format_name(model_format));
  j["cache"] = cache ? artifact_json(*cache) : json(nullptr);
  j["indices"] = json::array();
  for (const Artifact& a : indices) j["indices"].push_back(artifact_json(a));
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  return j.dump(2) + "\n";
}

StoreManifest StoreManifest::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what(), e.byte);
  }
  StoreManifest m;
  try {
    m.version = j.at("version").get<int>();
    if (m.version != kStoreVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "store version " + std::to_string(m.version) + " is not supported (expected " +
                      std::to_string(kStoreVersion) + ")");
    }
    m.model = artifact_from(j.at("model"));
    const auto fmt = parse_model_format(j.at("model").at("format").get<std::string>());
    if (!fmt) throw FormatError("unknown model format in manifest", 0);
    m.model_format = *fmt;
    if (j.contains("cache") && !j.at("cache").is_null()) m.cache = artifact_from(j.at("cache"));
    if (j.contains("indices")) {
      for (const json& a : j.at("indices")) m.indices.push_back(artifact_from(a));
    }
    m.seed = j.value("seed", std::uint64_t{0});
    m.config_hash = j.value("config_hash", std::string{});
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what(), 0);
  }
  return m;
}

std::string config_hash(const TrainingConfig& cfg) {
  return util::hex32(util::crc32(cfg.to_json()));
}

void save_store(const fs::path& dir, const EmbeddingModel& model, ModelFormat format,
                std::uint64_t seed, const std::string& hash, const RowAttributeCache* cache) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  StoreManifest m;
  m.model_format = format;
  const std::string model_bytes =
      format == ModelFormat::kWord2VecText ? serialize_text(model) : serialize_binary(model);
  m.model = write_artifact(dir, format == ModelFormat::kWord2VecText ? "model.txt" : "model.bin",
                           model_bytes);
  if (cache) {
    RowAttributeCache stamped = *cache;
    if (stamped.config_hash().empty()) stamped.set_config_hash(hash);
    m.cache = write_artifact(dir, "rowcache.bin", serialize_row_cache(stamped));
  }
  m.seed = seed;
  m.config_hash = hash;
  write_manifest(dir, m);
  util::log(util::LogLevel::kInfo, "store_saved",
            {{"dir", dir.string()}, {"tokens", std::to_string(model.size())},
             {"model_crc32", m.model.crc32}});
}

void add_index_to_store(const fs::path& dir, const LshIndex& index) {
  add_index(dir, "lsh", serialize_lsh(index, store_fingerprint(dir)));
}

void add_index_to_store(const fs::path& dir, const SphericalKMeansIndex& index) {
  add_index(dir, "kmeans", serialize_kmeans(index, store_fingerprint(dir)));
}

void save_row_cache(const RowAttributeCache& cache, const fs::path& path) {
  util::write_file(path, serialize_row_cache(cache));
}

RowAttributeCache load_row_cache(const fs::path& path) {
  return parse_row_cache(util::read_file(path));
}

ModelStore ModelStore::open(const fs::path& dir) {
  ModelStore s;
  s.manifest_ = read_manifest(dir);
  s.model_ = parse_model(read_checked(dir, s.manifest_.model), s.manifest_.model_format);
  if (s.manifest_.cache) {
    s.cache_ = parse_row_cache(read_checked(dir, *s.manifest_.cache));
    if (s.cache_->dim() != s.model_.dim() && !s.cache_->empty()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row cache has dimension " + std::to_string(s.cache_->dim()) +
                      " but the model has " + std::to_string(s.model_.dim()));
    }
    if (s.cache_->config_hash() != s.manifest_.config_hash) {
      s.warnings_.push_back("row cache was built under config " + s.cache_->config_hash() +
                            ", model under " + s.manifest_.config_hash);
      util::log(util::LogLevel::kWarn, "cache_config_mismatch",
                {{"cache", s.cache_->config_hash()}, {"model", s.manifest_.config_hash}});
    }
  }
  const std::uint32_t fp = model_fingerprint(s.model_);
  for (const StoreManifest::Artifact& a : s.manifest_.indices) {
    LoadedIndex idx = parse_index(read_checked(dir, a));
    if (idx.fingerprint != fp) {
      throw Error(ErrorCode::kVersionMismatch,
                  (dir / a.file).string() + " was built for a different model; rebuild it");
    }
    if (idx.lsh) s.lsh_ = std::move(idx.lsh);
    if (idx.kmeans) s.kmeans_ = std::move(idx.kmeans);
  }
  return s;
}

AnnIndexSet ModelStore::indices() const {
  return {lsh_ ? &*lsh_ : nullptr, kmeans_ ? &*kmeans_ : nullptr};
}

}  // namespace cogdb
