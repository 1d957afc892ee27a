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

#include "cogdb/embedding.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <set>

#include "cogdb/error.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

using nlohmann::json;

// 1e-4 -> "1e-4"; values >= 0.01 use the shortest decimal form.
std::string format_sample(double v) {
  if (v == 0.0 || v >= 0.01) return util::format_double(v);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
  std::string s(buf, res.ptr);
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mantissa = s.substr(0, e);
  std::string exponent = s.substr(e + 1);
  std::string sign;
  if (!exponent.empty() && (exponent[0] == '-' || exponent[0] == '+')) {
    if (exponent[0] == '-') sign = "-";
    exponent.erase(0, 1);
  }
  exponent.erase(0, std::min(exponent.find_first_not_of('0'), exponent.size() - 1));
  return mantissa + "e" + sign + exponent;
}

template <typename T>
void read_optional(const json& doc, std::initializer_list<const char*> keys, T& out) {
  for (const char* key : keys) {
    if (doc.contains(key) && !doc[key].is_null()) {
      out = doc[key].get<T>();
      return;
    }
  }
}

}  // namespace

void TrainingConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kConfig, msg); };
  if (dimension < 1) fail("dimension must be >= 1");
  if (window < 1) fail("window must be >= 1");
  if (negative_samples < 0) fail("negative must be >= 0");
  if (min_count < 0) fail("min_count must be >= 0");
  if (epochs < 1) fail("epochs must be >= 1");
  if (!(learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (!(subsample_threshold >= 0.0)) fail("sample must be >= 0");
  if (threads < 1) fail("threads must be >= 1");
  for (const auto& [column, weight] : column_weights) {
    if (!(weight >= 0.0)) fail("column weight for '" + column + "' must be >= 0");
  }
}

std::string TrainingConfig::parameter_string() const {
  std::string s;
  s += "-size " + std::to_string(dimension);
  s += " -window " + std::to_string(window);
  s += " -negative " + std::to_string(negative_samples);
  s += " -hs 0";
  s += " -sample " + format_sample(subsample_threshold);
  s += " -min-count " + std::to_string(min_count);
  s += " -cbuffer " + std::to_string(cbuffer);
  s += " -cbow " + std::string(architecture == Architecture::kCbow ? "1" : "0");
  s += " -eweight " + std::to_string(eweight);
  s += " -threads " + std::to_string(threads);
  s += " -binary " + std::string(binary_output ? "1" : "0");
  s += " -iter " + std::to_string(epochs);
  return s;
}

TrainingConfig TrainingConfig::from_json(std::string_view json_text) {
  TrainingConfig cfg;
  try {
    const json doc = json::parse(json_text);
    if (!doc.contains("seed")) {
      throw Error(ErrorCode::kConfig, "training config must set \"seed\"");
    }
    read_optional(doc, {"size", "dimension"}, cfg.dimension);
    read_optional(doc, {"window"}, cfg.window);
    read_optional(doc, {"negative", "negative_samples"}, cfg.negative_samples);
    read_optional(doc, {"sample", "subsample_threshold"}, cfg.subsample_threshold);
    read_optional(doc, {"min_count", "min-count"}, cfg.min_count);
    read_optional(doc, {"iter", "epochs"}, cfg.epochs);
    if (doc.contains("architecture")) {
      const std::string arch = util::to_lower(doc["architecture"].get<std::string>());
      if (arch == "cbow") {
        cfg.architecture = Architecture::kCbow;
      } else if (arch == "skipgram" || arch == "skip-gram") {
        cfg.architecture = Architecture::kSkipGram;
      } else {
        throw Error(ErrorCode::kConfig, "unknown architecture '" + arch + "'");
      }
    } else if (doc.contains("cbow")) {
      const bool cbow = doc["cbow"].is_boolean() ? doc["cbow"].get<bool>()
                                                 : doc["cbow"].get<int>() != 0;
      cfg.architecture = cbow ? Architecture::kCbow : Architecture::kSkipGram;
    }
    cfg.learning_rate = cfg.architecture == Architecture::kCbow ? 0.05 : 0.025;
    read_optional(doc, {"alpha", "learning_rate"}, cfg.learning_rate);
    read_optional(doc, {"circular_window"}, cfg.circular_window);
    read_optional(doc, {"uniform_influence"}, cfg.uniform_influence);
    read_optional(doc, {"pk_always_neighbor"}, cfg.pk_always_neighbor);
    if (doc.contains("column_weights")) {
      for (const auto& [k, v] : doc["column_weights"].items()) {
        cfg.column_weights[util::to_lower(k)] = v.get<double>();
      }
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
    read_optional(doc, {"threads"}, cfg.threads);
    read_optional(doc, {"cbuffer"}, cfg.cbuffer);
    read_optional(doc, {"eweight"}, cfg.eweight);
    if (doc.contains("binary")) {
      cfg.binary_output = doc["binary"].is_boolean() ? doc["binary"].get<bool>()
                                                     : doc["binary"].get<int>() != 0;
    }
    if (doc.contains("hs") && doc["hs"].get<int>() != 0) {
      throw Error(ErrorCode::kConfig, "hierarchical softmax is not supported (hs must be 0)");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("training config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string TrainingConfig::to_json() const {
  json doc;
  doc["size"] = dimension;
  doc["window"] = window;
  doc["negative"] = negative_samples;
  doc["hs"] = 0;
  doc["sample"] = subsample_threshold;
  doc["min_count"] = min_count;
  doc["iter"] = epochs;
  doc["architecture"] = architecture == Architecture::kCbow ? "cbow" : "skipgram";
  doc["circular_window"] = circular_window;
  doc["uniform_influence"] = uniform_influence;
  doc["pk_always_neighbor"] = pk_always_neighbor;
  doc["column_weights"] = column_weights;
  doc["alpha"] = learning_rate;
  doc["seed"] = seed;
  doc["threads"] = threads;
  doc["cbuffer"] = cbuffer;
  doc["eweight"] = eweight;
  doc["binary"] = binary_output;
  return doc.dump(2) + "\n";
}

EmbeddingModel::EmbeddingModel(std::vector<std::string> vocab,
                               std::vector<float> vectors, std::size_t dim)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)), dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::kDimensionMismatch, "model dimension must be >= 1");
  if (vectors_.size() != vocab_.size() * dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector storage holds " + std::to_string(vectors_.size()) +
                    " floats, expected " + std::to_string(vocab_.size() * dim_));
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw Error(ErrorCode::kFormat, "duplicate token '" + vocab_[i] + "'");
    }
  }
  counts_.assign(vocab_.size(), 0);
}

std::optional<std::size_t> EmbeddingModel::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const float>> EmbeddingModel::lookup(std::string_view token) const {
  auto idx = find(token);
  if (!idx) return std::nullopt;
  return vector(*idx);
}

void EmbeddingModel::set_counts(std::vector<std::uint64_t> counts) {
  if (counts.size() != vocab_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "count vector size mismatch");
  }
  counts_ = std::move(counts);
}

void EmbeddingModel::set_output_weights(std::vector<float> weights) {
  if (!weights.empty() && weights.size() != vocab_.size() * dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "output weight size mismatch");
  }
  output_weights_ = std::move(weights);
}

std::size_t EmbeddingModel::add_token(std::string token, std::span<const float> vec) {
  if (vec.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "vector for '" + token + "' has wrong size");
  }
  const std::size_t idx = vocab_.size();
  if (!index_.emplace(token, idx).second) {
    throw Error(ErrorCode::kFormat, "duplicate token '" + token + "'");
  }
  vocab_.push_back(std::move(token));
  vectors_.insert(vectors_.end(), vec.begin(), vec.end());
  counts_.push_back(0);
  if (!output_weights_.empty()) output_weights_.resize(vocab_.size() * dim_, 0.0f);
  normalized_ = false;
  return idx;
}

void EmbeddingModel::normalize() {
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    std::span<float> v = mutable_vector(i);
    double sq = 0.0;
    for (float x : v) sq += static_cast<double>(x) * x;
    const double norm = std::sqrt(sq);
    if (!std::isfinite(norm) || norm == 0.0) {
      std::fill(v.begin(), v.end(), 0.0f);
      v[0] = 1.0f;
      continue;
    }
    if (std::abs(norm - 1.0) <= 1e-6) continue;
    for (float& x : v) x = static_cast<float>(x / norm);
  }
  normalized_ = true;
}

Vocabulary build_vocab(const std::vector<TokenSentence>& corpus, const TrainingConfig& cfg) {
  std::unordered_map<std::string, std::uint64_t> freq;
  std::size_t total = 0;
  for (const TokenSentence& s : corpus) {
    for (const std::string& t : s.tokens) {
      if (t == kSentinelToken) continue;
      ++freq[t];
      ++total;
    }
  }
  if (total == 0) throw Error(ErrorCode::kEmptyCorpus, "corpus has no tokens");

  std::vector<std::pair<std::string, std::uint64_t>> entries;
  entries.reserve(freq.size());
  for (auto& [token, count] : freq) {
    if (count >= static_cast<std::uint64_t>(cfg.min_count)) entries.emplace_back(token, count);
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  Vocabulary vocab;
  vocab.tokens.emplace_back(kSentinelToken);
  vocab.counts.push_back(corpus.size());
  for (auto& [token, count] : entries) {
    vocab.tokens.push_back(std::move(token));
    vocab.counts.push_back(count);
  }
  for (std::size_t i = 0; i < vocab.tokens.size(); ++i) vocab.index.emplace(vocab.tokens[i], i);
  return vocab;
}

std::vector<std::size_t> context_positions(std::size_t sentence_length, std::size_t center,
                                           const WindowOptions& options, int shrink,
                                           std::optional<std::size_t> key_position) {
  std::vector<std::size_t> out;
  if (sentence_length == 0 || center >= sentence_length) return out;
  const int effective_shrink = options.uniform_influence ? 0 : std::clamp(shrink, 0, options.window - 1);
  const long radius = options.window - effective_shrink;
  const long n = static_cast<long>(sentence_length);
  const long c = static_cast<long>(center);
  auto push = [&](std::size_t pos) {
    if (pos == center) return;
    if (std::find(out.begin(), out.end(), pos) != out.end()) return;
    out.push_back(pos);
  };
  for (long off = -radius; off <= radius; ++off) {
    if (off == 0) continue;
    long pos = c + off;
    if (options.circular) {
      pos = ((pos % n) + n) % n;
    } else if (pos < 0 || pos >= n) {
      continue;
    }
    push(static_cast<std::size_t>(pos));
  }
  if (key_position && *key_position < sentence_length) push(*key_position);
  return out;
}

}  // namespace cogdb
