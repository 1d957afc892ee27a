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

#ifndef COGDB_IMAGE_TAGS_H_
#define COGDB_IMAGE_TAGS_H_

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cogdb/table.h"

namespace cogdb {

// Per-column token groups parsed out of "/a/b/.../d" hierarchy strings.
struct HierarchyColumns {
  std::vector<std::string> class_a;
  std::vector<std::string> class_b;
  std::vector<std::string> class_c;
  std::vector<std::string> class_d;
};

// First token -> classA, last -> classD; with more than two tokens the second
// goes to classB and the rest of the middle to classC. Strings merge column by
// column keeping the first occurrence of each token; an empty column becomes
// `classX_empty`. Throws MalformedHierarchy on strings with fewer than two
// tokens.
HierarchyColumns parse_type_hierarchy(const std::vector<std::string>& values);

// One row of the image tag table: imagename, classA..classD, color.
struct ImageTagRecord {
  std::string imagename;
  std::vector<std::string> class_a;
  std::vector<std::string> class_b;
  std::vector<std::string> class_c;
  std::vector<std::string> class_d;
  std::vector<std::string> color;

  // Space-joined cell text in table column order.
  std::array<std::string, 6> cells() const;
};

// Accepts either the full classify envelope
//   {"images": [{"classifiers": [{"classes": [...]}]}]}
// or a bare {"classes": [...]} object. Each class entry carries "class" and
// optionally "type_hierarchy"; classes named "<name> color" are colors.
// Throws SchemaError when no classes array is present.
ImageTagRecord textify_image_response(std::string imagename,
                                      std::string_view response_json);

// The six-column schema: imagename (primary key), classA..classD, color.
std::vector<ColumnSchema> image_table_schema();
RelationalTable image_tag_table(std::string name,
                                const std::vector<ImageTagRecord>& records);

// Source of classification responses.
class ImageTagClient {
 public:
  virtual ~ImageTagClient() = default;

  // Response JSON for `imagename`, or nullopt when the image is skipped.
  virtual std::optional<std::string> classify(const std::string& imagename) = 0;

  // Image names this client can serve, sorted.
  virtual std::vector<std::string> list_images() const = 0;
};

// Reads `<dir>/<imagename>.json`.
class FixtureTransport : public ImageTagClient {
 public:
  explicit FixtureTransport(std::filesystem::path dir);

  std::optional<std::string> classify(const std::string& imagename) override;
  std::vector<std::string> list_images() const override;

 private:
  std::filesystem::path dir_;
};

// Posts `<image_dir>/<imagename>.<ext>` to a classify endpoint. Images larger
// than `max_image_bytes` are skipped.
class HttpTransport : public ImageTagClient {
 public:
  struct Options {
    std::string endpoint;        // e.g. "https://host:443/v3/classify"
    std::string api_key;
    std::filesystem::path image_dir;
    std::size_t max_image_bytes = 2u * 1024u * 1024u;
    int timeout_seconds = 30;
  };

  explicit HttpTransport(Options options);

  std::optional<std::string> classify(const std::string& imagename) override;
  std::vector<std::string> list_images() const override;

 private:
  std::optional<std::filesystem::path> image_path(const std::string& imagename) const;

  Options options_;
};

// Runs `client` over `imagenames` (or everything it lists when empty).
RelationalTable build_image_table(ImageTagClient& client, std::string table_name,
                                  std::vector<std::string> imagenames = {});

}  // namespace cogdb

#endif  // COGDB_IMAGE_TAGS_H_
