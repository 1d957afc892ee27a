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

#include "cli/project_config.h"

#include <cstdlib>
#include <memory>

#include <json.hpp>

#include "cogdb/csv.h"
#include "cogdb/error.h"
#include "cogdb/image_tags.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/strings.h"

namespace cogdb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_exists(const fs::path& p, std::string_view what) {
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kConfig, std::string(what) + " not found: " + p.string());
  }
}

std::string get_string(const json& j, const char* key, std::string_view ctx) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorCode::kConfig, std::string(ctx) + ": \"" + key + "\" must be a string");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

ProjectConfig ProjectConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::kConfig, "config not found: " + path.string());
  return parse(util::read_file(path), path.parent_path().empty() ? fs::path(".")
                                                                 : path.parent_path());
}

ProjectConfig ProjectConfig::parse(std::string_view text, const fs::path& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");

  ProjectConfig cfg;
  cfg.base_dir = base;
  try {
    if (!doc.contains("tables") || !doc["tables"].is_array() || doc["tables"].empty()) {
      throw Error(ErrorCode::kConfig, "config needs a non-empty \"tables\" array");
    }
    for (const json& t : doc["tables"]) {
      TableSource s;
      s.name = get_string(t, "name", "table");
      if (t.contains("csv")) {
        s.csv = resolve(base, get_string(t, "csv", s.name));
        require_exists(s.csv, "table csv");
        if (t.contains("schema")) {
          s.schema = resolve(base, get_string(t, "schema", s.name));
          require_exists(s.schema, "table schema");
        }
      } else if (t.contains("image_fixtures")) {
        s.image_fixtures = resolve(base, get_string(t, "image_fixtures", s.name));
        require_exists(*s.image_fixtures, "image fixture directory");
      } else if (t.value("image_service", false)) {
        s.image_service = true;
      } else {
        throw Error(ErrorCode::kConfig,
                    "table " + s.name + " needs \"csv\", \"image_fixtures\" or \"image_service\"");
      }
      if (t.contains("images")) s.images = t["images"].get<std::vector<std::string>>();
      cfg.tables.push_back(std::move(s));
    }
    if (doc.contains("foreign_keys")) {
      for (const json& f : doc["foreign_keys"]) {
        cfg.foreign_keys.push_back({get_string(f, "table", "foreign key"),
                                    get_string(f, "column", "foreign key"),
                                    get_string(f, "references", "foreign key")});
      }
    }
    if (doc.contains("external_kb")) {
      for (const json& k : doc["external_kb"]) {
        KbSource kb;
        kb.path = resolve(base, get_string(k, "path", "external_kb"));
        kb.repetitions = k.value("repetitions", 1);
        if (kb.repetitions < 1) throw Error(ErrorCode::kConfig, "kb repetitions must be >= 1");
        require_exists(kb.path, "external KB");
        cfg.external_kb.push_back(std::move(kb));
      }
    }
    if (doc.contains("training")) {
      const json& tr = doc["training"];
      if (tr.is_string()) {
        const fs::path p = resolve(base, tr.get<std::string>());
        require_exists(p, "training config");
        cfg.training = TrainingConfig::from_json(util::read_file(p));
      } else {
        cfg.training = TrainingConfig::from_json(tr.dump());
      }
    } else {
      throw Error(ErrorCode::kConfig, "config needs a \"training\" object or path");
    }
    if (doc.contains("corpus")) cfg.corpus = get_string(doc, "corpus", "config");
    cfg.corpus = resolve(base, cfg.corpus.string());
    if (doc.contains("store")) cfg.store = get_string(doc, "store", "config");
    cfg.store = resolve(base, cfg.store.string());
    if (doc.contains("model_format")) {
      auto f = parse_model_format(get_string(doc, "model_format", "config"));
      if (!f) throw Error(ErrorCode::kConfig, "unknown model_format");
      cfg.model_format = *f;
    }
    if (doc.contains("ext_store")) {
      cfg.ext_store = resolve(base, get_string(doc, "ext_store", "config"));
    }
    if (doc.contains("index")) {
      const json& ix = doc["index"];
      cfg.lsh_bits = ix.value("lsh_bits", cfg.lsh_bits);
      cfg.kmeans_k = ix.value("kmeans_k", cfg.kmeans_k);
      cfg.kmeans_iters = ix.value("kmeans_iters", cfg.kmeans_iters);
      cfg.index_seed = ix.value("seed", cfg.index_seed);
    }
    if (doc.contains("oov_policy")) {
      auto p = parse_oov_policy(get_string(doc, "oov_policy", "config"));
      if (!p) throw Error(ErrorCode::kConfig, "unknown oov_policy");
      cfg.oov = *p;
    }
    if (doc.contains("stop_words")) {
      cfg.stop_words = resolve(base, get_string(doc, "stop_words", "config"));
      require_exists(*cfg.stop_words, "stop word list");
    }
    if (doc.contains("image_service")) {
      const json& s = doc["image_service"];
      ImageServiceConfig is;
      is.endpoint = get_string(s, "endpoint", "image_service");
      is.image_dir = resolve(base, get_string(s, "image_dir", "image_service"));
      is.max_image_bytes = s.value("max_image_bytes", is.max_image_bytes);
      is.timeout_seconds = s.value("timeout_seconds", is.timeout_seconds);
      cfg.image_service = std::move(is);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad config value: ") + e.what());
  }
  for (const TableSource& t : cfg.tables) {
    if (t.image_service && !cfg.image_service) {
      throw Error(ErrorCode::kConfig, "table " + t.name + " uses the image service but "
                                      "\"image_service\" is not configured");
    }
  }
  return cfg;
}

fs::path ProjectConfig::layout_path() const {
  fs::path p = corpus;
  p += ".layout.jsonl";
  return p;
}

StopWords ProjectConfig::load_stop_words() const {
  return stop_words ? StopWords::from_file(*stop_words) : StopWords::english();
}

query::Catalog load_catalog(const ProjectConfig& cfg) {
  query::Catalog catalog(cfg.load_stop_words());
  for (const TableSource& t : cfg.tables) {
    RelationalTable table;
    if (!t.csv.empty()) {
      RelationalTable loaded = load_csv_table(t.csv, t.schema);
      table = RelationalTable(t.name, loaded.columns());
      for (const auto& row : loaded.rows()) table.add_row(row);
    } else {
      std::unique_ptr<ImageTagClient> client;
      if (t.image_fixtures) {
        client = std::make_unique<FixtureTransport>(*t.image_fixtures);
      } else {
        HttpTransport::Options o;
        o.endpoint = cfg.image_service->endpoint;
        o.image_dir = cfg.image_service->image_dir;
        o.max_image_bytes = cfg.image_service->max_image_bytes;
        o.timeout_seconds = cfg.image_service->timeout_seconds;
        const char* key = std::getenv("COGDB_IMAGE_API_KEY");
        if (!key || !*key) {
          throw Error(ErrorCode::kConfig, "COGDB_IMAGE_API_KEY is not set");
        }
        o.api_key = key;
        client = std::make_unique<HttpTransport>(std::move(o));
      }
      table = build_image_table(*client, t.name, t.images);
    }
    catalog.add(std::move(table));
  }
  return catalog;
}

}  // namespace cogdb::cli
