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

#include "cogdb/word2vec_io.h"

#include <bit>
#include <cctype>
#include <cmath>
#include <charconv>
#include <cstring>

#include "cogdb/error.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

static_assert(sizeof(float) == 4);

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  void skip_blanks() {
    while (!at_end() && (bytes_[pos_] == ' ' || bytes_[pos_] == '\t' ||
                         bytes_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void skip_whitespace() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
  }

  std::string_view word() {
    const std::size_t start = pos_;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    return bytes_.substr(start, pos_ - start);
  }

  std::size_t unsigned_number(const char* what) {
    skip_blanks();
    const std::size_t start = pos_;
    std::string_view w = word();
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (w.empty() || ec != std::errc() || p != w.data() + w.size()) {
      throw FormatError(std::string("expected ") + what, start);
    }
    return v;
  }

  float text_float() {
    skip_blanks();
    const std::size_t start = pos_;
    std::string_view w = word();
    float v = 0.0f;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (w.empty() || ec != std::errc() || p != w.data() + w.size()) {
      throw FormatError("malformed vector component", start);
    }
    return v;
  }

  void expect_newline() {
    skip_blanks();
    if (at_end() || bytes_[pos_] != '\n') throw FormatError("expected end of line", pos_);
    ++pos_;
  }

  float binary_float() {
    if (bytes_.size() - pos_ < 4) throw FormatError("truncated vector", pos_);
    std::uint32_t raw = 0;
    for (int i = 0; i < 4; ++i) {
      raw |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return std::bit_cast<float>(raw);
  }

  void expect_byte(char c, const char* what) {
    if (at_end() || bytes_[pos_] != c) throw FormatError(what, pos_);
    ++pos_;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void append_float_le(std::string& out, float v) {
  const std::uint32_t raw = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((raw >> (8 * i)) & 0xFF));
}

}  // namespace

std::string_view model_format_name(ModelFormat format) {
  return format == ModelFormat::kWord2VecText ? "word2vec_text" : "word2vec_binary";
}

std::optional<ModelFormat> parse_model_format(std::string_view name) {
  const std::string n = util::to_lower(name);
  if (n == "word2vec_text" || n == "text" || n == "txt") return ModelFormat::kWord2VecText;
  if (n == "word2vec_binary" || n == "binary" || n == "bin") return ModelFormat::kWord2VecBinary;
  return std::nullopt;
}

std::string serialize_text(const EmbeddingModel& model) {
  std::string out = std::to_string(model.size()) + " " + std::to_string(model.dim()) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < model.size(); ++i) {
    out += model.token(i);
    for (float v : model.vector(i)) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out.push_back(' ');
      out.append(buf, p);
    }
    out.push_back('\n');
  }
  return out;
}

std::string serialize_binary(const EmbeddingModel& model) {
  std::string out = std::to_string(model.size()) + " " + std::to_string(model.dim()) + "\n";
  out.reserve(out.size() + model.size() * (model.dim() * 4 + 16));
  for (std::size_t i = 0; i < model.size(); ++i) {
    out += model.token(i);
    out.push_back(' ');
    for (float v : model.vector(i)) append_float_le(out, v);
    out.push_back('\n');
  }
  return out;
}

EmbeddingModel parse_model(std::string_view bytes, ModelFormat format) {
  Reader r(bytes);
  const std::size_t vocab_size = r.unsigned_number("vocabulary size in header");
  const std::size_t dim = r.unsigned_number("dimension in header");
  if (dim == 0) throw FormatError("dimension must be positive", 0);
  r.expect_newline();

  std::vector<std::string> vocab;
  std::vector<float> vectors;
  vocab.reserve(vocab_size);
  vectors.reserve(vocab_size * dim);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    r.skip_whitespace();
    if (r.at_end()) {
      throw FormatError("header declares " + std::to_string(vocab_size) +
                            " tokens but file holds " + std::to_string(i),
                        r.pos());
    }
    const std::size_t token_pos = r.pos();
    std::string token(r.word());
    if (format == ModelFormat::kWord2VecText) {
      for (std::size_t k = 0; k < dim; ++k) vectors.push_back(r.text_float());
      r.skip_blanks();
      if (!r.at_end()) r.expect_newline();
    } else {
      r.expect_byte(' ', "expected blank after token");
      for (std::size_t k = 0; k < dim; ++k) vectors.push_back(r.binary_float());
    }
    vocab.push_back(std::move(token));
    if (vocab.size() != vectors.size() / dim) throw FormatError("vector size mismatch", token_pos);
  }
  r.skip_whitespace();
  if (!r.at_end()) {
    throw FormatError("trailing data after " + std::to_string(vocab_size) + " tokens", r.pos());
  }
  for (float v : vectors) {
    if (!std::isfinite(v)) throw FormatError("non-finite vector component", 0);
  }
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!seen.emplace(vocab[i], i).second) {
      throw FormatError("duplicate token '" + vocab[i] + "'", 0);
    }
  }
  EmbeddingModel model(std::move(vocab), std::move(vectors), dim);
  model.normalize();
  return model;
}

EmbeddingModel load_model(const std::filesystem::path& path, ModelFormat format) {
  return parse_model(util::read_file(path), format);
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                ModelFormat format) {
  util::write_file(path, format == ModelFormat::kWord2VecText ? serialize_text(model)
                                                        : serialize_binary(model));
}

}  // namespace cogdb
