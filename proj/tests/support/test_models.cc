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

#include "support/test_models.h"

#include <atomic>
#include <cmath>
#include <unistd.h>

#include "cogdb/util/rng.h"

namespace cogdb::testing {

namespace fs = std::filesystem;

fs::path fixture_path(const std::string& rel) { return fs::path(COGDB_FIXTURE_DIR) / rel; }
fs::path golden_path(const std::string& rel) { return fs::path(COGDB_GOLDEN_DIR) / rel; }

fs::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("cogdb_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

EmbeddingModel make_model(const std::vector<std::pair<std::string, std::vector<float>>>& rows,
                          bool normalize) {
  std::vector<std::string> vocab;
  std::vector<float> data;
  const std::size_t dim = rows.empty() ? 1 : rows.front().second.size();
  for (const auto& [tok, vec] : rows) {
    vocab.push_back(tok);
    data.insert(data.end(), vec.begin(), vec.end());
  }
  EmbeddingModel m(std::move(vocab), std::move(data), dim);
  if (normalize) m.normalize();
  return m;
}

EmbeddingModel random_model(std::size_t n, std::size_t dim, std::uint64_t seed) {
  util::SplitMix64 rng(seed);
  std::vector<std::string> vocab{"</s>"};
  std::vector<float> data;
  for (std::size_t k = 0; k < dim; ++k) data.push_back(static_cast<float>(rng.normal()));
  for (std::size_t i = 0; i < n; ++i) {
    std::string t = std::to_string(i);
    vocab.push_back("w" + std::string(4 - std::min<std::size_t>(4, t.size()), '0') + t);
    for (std::size_t k = 0; k < dim; ++k) data.push_back(static_cast<float>(rng.normal()));
  }
  EmbeddingModel m(std::move(vocab), std::move(data), dim);
  m.normalize();
  return m;
}

std::vector<TokenSentence> two_group_corpus(std::size_t rows, std::uint64_t seed) {
  util::SplitMix64 rng(seed);
  const std::vector<std::vector<std::string>> merchants = {{"merchant_a", "merchant_c"},
                                                           {"merchant_b", "merchant_d"}};
  const std::vector<std::vector<std::string>> categories = {{"fresh_produce", "bakery"},
                                                            {"stationery", "office"}};
  const std::vector<std::vector<std::string>> items = {
      {"bananas", "apples", "berries", "grapes", "bread", "melons"},
      {"crayons", "pens", "paper", "folders", "staplers", "ink"}};
  const std::vector<std::string> cities = {"stamford", "norwalk", "darien", "greenwich"};
  std::vector<TokenSentence> corpus;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t g = r % 2;
    TokenSentence s;
    s.table = "sales";
    s.row_key = "cust" + std::to_string(r);
    auto add = [&](std::string tok, const char* col) {
      s.tokens.push_back(std::move(tok));
      s.columns.push_back(std::string("sales.") + col);
    };
    add(*s.row_key, "custid");
    add(cities[rng.below(cities.size())], "address");
    add(merchants[g][rng.below(2)], "merchant");
    add(categories[g][rng.below(2)], "category");
    for (int i = 0; i < 3; ++i) add(items[g][rng.below(items[g].size())], "items");
    corpus.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace cogdb::testing
