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

#include <algorithm>
#include <regex>

#include "cogdb/error.h"
#include "cogdb/image_tags.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/log.h"
#include "cogdb/util/strings.h"

#include <httplib.h>

namespace cogdb {

namespace {

constexpr const char* kImageExtensions[] = {".jpg", ".jpeg", ".png", ".JPEG", ".JPG", ".PNG"};

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, kUrl)) {
    throw Error(ErrorCode::kConfig, "bad classify endpoint '" + url + "'");
  }
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

}  // namespace

HttpTransport::HttpTransport(Options options) : options_(std::move(options)) {
  split_endpoint(options_.endpoint);
  if (!std::filesystem::is_directory(options_.image_dir)) {
    throw Error(ErrorCode::kConfig,
                "image directory " + options_.image_dir.string() + " does not exist");
  }
}

std::optional<std::filesystem::path> HttpTransport::image_path(
    const std::string& imagename) const {
  for (const char* ext : kImageExtensions) {
    auto p = options_.image_dir / (imagename + ext);
    if (std::filesystem::exists(p)) return p;
  }
  return std::nullopt;
}

std::vector<std::string> HttpTransport::list_images() const {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(options_.image_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (std::find(std::begin(kImageExtensions), std::end(kImageExtensions), ext) !=
        std::end(kImageExtensions)) {
      names.push_back(entry.path().stem().string());
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

std::optional<std::string> HttpTransport::classify(const std::string& imagename) {
  auto path = image_path(imagename);
  if (!path) throw Error(ErrorCode::kIo, "no image file for " + imagename);
  const auto size = std::filesystem::file_size(*path);
  if (size > options_.max_image_bytes) {
    util::log(util::LogLevel::kWarn, "image_skipped",
              {{"image", imagename}, {"bytes", std::to_string(size)},
               {"reason", "exceeds size limit"}});
    return std::nullopt;
  }
  const Endpoint ep = split_endpoint(options_.endpoint);
  httplib::Client client(ep.origin);
  client.set_connection_timeout(options_.timeout_seconds, 0);
  client.set_read_timeout(options_.timeout_seconds, 0);
  if (!options_.api_key.empty()) client.set_basic_auth("apikey", options_.api_key);

  httplib::MultipartFormDataItems items = {
      {"images_file", util::read_file(*path), path->filename().string(),
       "application/octet-stream"},
  };
  auto res = client.Post(ep.path, items);
  if (!res) {
    throw Error(ErrorCode::kIo, "classify request for " + imagename + " failed: " +
                                    httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kIo, "classify request for " + imagename + " returned HTTP " +
                                    std::to_string(res->status));
  }
  return res->body;
}

}  // namespace cogdb
