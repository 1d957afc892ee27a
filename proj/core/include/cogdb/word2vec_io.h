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

#ifndef COGDB_WORD2VEC_IO_H_
#define COGDB_WORD2VEC_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "cogdb/embedding.h"

namespace cogdb {

enum class ModelFormat { kWord2VecText, kWord2VecBinary };

std::string_view model_format_name(ModelFormat format);
std::optional<ModelFormat> parse_model_format(std::string_view name);

// Text: "V d\n" then "token v1 ... vd\n". Floats are printed shortest
// round-trip, so a reload is exact.
std::string serialize_text(const EmbeddingModel& model);

// Binary: "V d\n" then per token "token " + d little-endian float32 + "\n".
std::string serialize_binary(const EmbeddingModel& model);

// Parses either format. Vectors off unit norm by more than 1e-6 are
// normalized. Throws FormatError carrying the byte offset of the problem.
EmbeddingModel parse_model(std::string_view bytes, ModelFormat format);

EmbeddingModel load_model(const std::filesystem::path& path, ModelFormat format);
void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                ModelFormat format);

}  // namespace cogdb

#endif  // COGDB_WORD2VEC_IO_H_
