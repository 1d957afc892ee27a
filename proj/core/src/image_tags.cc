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

#include "cogdb/image_tags.h"

#include <algorithm>
#include <json.hpp>

#include "cogdb/error.h"
#include "cogdb/textify.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

using nlohmann::json;

constexpr std::string_view kColorSuffix = " color";

void add_unique(std::vector<std::string>& column, std::string token) {
  if (token.empty()) return;
  if (std::find(column.begin(), column.end(), token) == column.end()) {
    column.push_back(std::move(token));
  }
}

std::string hierarchy_token(std::string_view raw) {
  std::string t = util::to_lower(raw);
  std::string out;
  for (char c : t) {
    if (static_cast<unsigned char>(c) >= 0x80) continue;
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
      out += c;
    } else if (c == ' ' || c == '\t') {
      out += ' ';
    }
  }
  return util::join(util::split_whitespace(out), "_");
}

void fill_empty(std::vector<std::string>& column, std::string_view name) {
  if (column.empty()) column.push_back(empty_marker(name));
}

std::string join_cell(const std::vector<std::string>& tokens) {
  return util::join(tokens, " ");
}

const json* find_classes(const json& doc) {
  if (doc.contains("classes") && doc["classes"].is_array()) return &doc["classes"];
  return nullptr;
}

std::vector<const json*> collect_class_arrays(const json& doc) {
  std::vector<const json*> arrays;
  if (const json* direct = find_classes(doc)) {
    arrays.push_back(direct);
    return arrays;
  }
  if (doc.contains("images") && doc["images"].is_array() && !doc["images"].empty()) {
    const json& image = doc["images"][0];
    if (image.contains("classifiers") && image["classifiers"].is_array()) {
      for (const json& classifier : image["classifiers"]) {
        if (const json* c = find_classes(classifier)) arrays.push_back(c);
      }
    }
  }
  return arrays;
}

}  // namespace

HierarchyColumns parse_type_hierarchy(const std::vector<std::string>& values) {
  HierarchyColumns out;
  for (const std::string& value : values) {
    std::vector<std::string> parts;
    for (const std::string& piece : util::split(value, '/')) {
      std::string token = hierarchy_token(piece);
      if (!token.empty()) parts.push_back(std::move(token));
    }
    if (parts.size() < 2) {
      throw Error(ErrorCode::kMalformedHierarchy,
                  "type_hierarchy '" + value + "' has fewer than 2 tokens");
    }
    add_unique(out.class_a, parts.front());
    add_unique(out.class_d, parts.back());
    if (parts.size() > 2) {
      add_unique(out.class_b, parts[1]);
      for (std::size_t i = 2; i + 1 < parts.size(); ++i) {
        add_unique(out.class_c, parts[i]);
      }
    }
  }
  fill_empty(out.class_a, "classA");
  fill_empty(out.class_b, "classB");
  fill_empty(out.class_c, "classC");
  fill_empty(out.class_d, "classD");
  return out;
}

std::array<std::string, 6> ImageTagRecord::cells() const {
  return {imagename,          join_cell(class_a), join_cell(class_b),
          join_cell(class_c), join_cell(class_d), join_cell(color)};
}

ImageTagRecord textify_image_response(std::string imagename,
                                      std::string_view response_json) {
  json doc;
  try {
    doc = json::parse(response_json);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema,
                "response for " + imagename + " is not JSON: " + e.what());
  }
  const auto arrays = collect_class_arrays(doc);
  if (arrays.empty()) {
    throw Error(ErrorCode::kSchema, "response for " + imagename + " has no classes array");
  }

  std::vector<std::string> hierarchies;
  ImageTagRecord record;
  record.imagename = std::move(imagename);
  for (const json* classes : arrays) {
    for (const json& entry : *classes) {
      if (!entry.is_object()) continue;
      if (entry.contains("type_hierarchy") && entry["type_hierarchy"].is_string()) {
        hierarchies.push_back(entry["type_hierarchy"].get<std::string>());
      }
      if (entry.contains("class") && entry["class"].is_string()) {
        const std::string name = entry["class"].get<std::string>();
        if (name.size() > kColorSuffix.size() &&
            util::iequals(std::string_view(name).substr(name.size() - kColorSuffix.size()),
                          kColorSuffix)) {
          add_unique(record.color,
                     hierarchy_token(name.substr(0, name.size() - kColorSuffix.size())));
        }
      }
    }
  }
  HierarchyColumns cols = parse_type_hierarchy(hierarchies);
  record.class_a = std::move(cols.class_a);
  record.class_b = std::move(cols.class_b);
  record.class_c = std::move(cols.class_c);
  record.class_d = std::move(cols.class_d);
  fill_empty(record.color, "color");
  return record;
}

std::vector<ColumnSchema> image_table_schema() {
  std::vector<ColumnSchema> schema(6);
  schema[0].name = "imagename";
  schema[0].kind = ColumnKind::kPrimaryKey;
  const char* names[] = {"classA", "classB", "classC", "classD", "color"};
  for (int i = 0; i < 5; ++i) {
    schema[i + 1].name = names[i];
    schema[i + 1].kind = ColumnKind::kText;
  }
  return schema;
}

RelationalTable image_tag_table(std::string name,
                                const std::vector<ImageTagRecord>& records) {
  RelationalTable table(std::move(name), image_table_schema());
  for (const ImageTagRecord& rec : records) {
    RelationalTable::Row row;
    for (std::string& cell : rec.cells()) row.emplace_back(std::move(cell));
    table.add_row(std::move(row));
  }
  return table;
}

FixtureTransport::FixtureTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::kConfig, "fixture directory " + dir_.string() + " does not exist");
  }
}

std::optional<std::string> FixtureTransport::classify(const std::string& imagename) {
  const auto path = dir_ / (imagename + ".json");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "no fixture response " + path.string());
  }
  return util::read_file(path);
}

std::vector<std::string> FixtureTransport::list_images() const {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      names.push_back(entry.path().stem().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

RelationalTable build_image_table(ImageTagClient& client, std::string table_name,
                                  std::vector<std::string> imagenames) {
  if (imagenames.empty()) imagenames = client.list_images();
  std::vector<ImageTagRecord> records;
  records.reserve(imagenames.size());
  for (const std::string& name : imagenames) {
    std::optional<std::string> response = client.classify(name);
    if (!response) continue;
    records.push_back(textify_image_response(name, *response));
  }
  return image_tag_table(std::move(table_name), records);
}

}  // namespace cogdb
