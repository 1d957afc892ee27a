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

#ifndef COGDB_TESTS_TEST_MODELS_H_
#define COGDB_TESTS_TEST_MODELS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cogdb/embedding.h"
#include "cogdb/textify.h"

namespace cogdb::testing {

std::filesystem::path fixture_path(const std::string& rel);
std::filesystem::path golden_path(const std::string& rel);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

// Model with exactly these vectors (not normalized unless asked).
EmbeddingModel make_model(const std::vector<std::pair<std::string, std::vector<float>>>& rows,
                          bool normalize = false);

// `</s>` plus tokens w0000.. with Gaussian components, unit-normalized.
EmbeddingModel random_model(std::size_t n, std::size_t dim, std::uint64_t seed);

// Two customer groups sharing merchants/categories/items within a group.
// Keys are cust0..cust{rows-1}; even rows belong to group 0.
std::vector<TokenSentence> two_group_corpus(std::size_t rows, std::uint64_t seed);

}  // namespace cogdb::testing

#endif  // COGDB_TESTS_TEST_MODELS_H_
