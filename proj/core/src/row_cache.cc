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

#include "cogdb/row_cache.h"

#include <bit>
#include <cstring>

#include "cogdb/error.h"
#include "cogdb/util/log.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

constexpr std::string_view kMagic = "CGDBRAC";
constexpr std::uint32_t kVersion = 1;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_string(std::string& out, std::string_view s) {
  put_u64(out, s.size());
  out.append(s);
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view b) : b_(b) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s(b_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  std::string_view raw(std::size_t n) {
    need(n);
    auto s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == b_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::uint64_t n) const {
    if (b_.size() - pos_ < n) throw FormatError("truncated row cache", pos_);
  }

  std::string_view b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view oov_policy_name(OovPolicy policy) {
  return policy == OovPolicy::kError ? "error" : "skip_with_default";
}

std::optional<OovPolicy> parse_oov_policy(std::string_view name) {
  const std::string n = util::to_lower(name);
  if (n == "error") return OovPolicy::kError;
  if (n == "skip_with_default" || n == "skip") return OovPolicy::kSkipWithDefault;
  return std::nullopt;
}

Vec to_vec(std::span<const float> v) { return Vec(v.begin(), v.end()); }

Vec average_tokens(const std::vector<std::string>& tokens, const EmbeddingModel& model,
                   OovPolicy policy, std::size_t* skipped) {
  Vec acc(model.dim(), 0.0);
  std::size_t used = 0;
  std::size_t missing = 0;
  for (const std::string& t : tokens) {
    auto v = model.lookup(t);
    if (!v) {
      ++missing;
      continue;
    }
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += (*v)[k];
    ++used;
  }
  if (skipped) *skipped = missing;
  if (used == 0) {
    if (policy == OovPolicy::kError) {
      throw Error(ErrorCode::kAllTokensUnknown,
                  "no known token in [" + util::join(tokens, " ") + "]");
    }
    auto fallback = model.lookup(kSentinelToken);
    if (!fallback) {
      throw Error(ErrorCode::kAllTokensUnknown,
                  "no known token in [" + util::join(tokens, " ") + "] and no </s> vector");
    }
    return to_vec(*fallback);
  }
  for (double& x : acc) x /= static_cast<double>(used);
  return acc;
}

void RowAttributeCache::put(const std::string& table, const std::string& row_key,
                            const std::string& column, Vec vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "row cache vector has wrong dimension");
  }
  rows_[{table, row_key}][column] = std::move(vec);
}

const RowAttributeCache::ColumnVectors* RowAttributeCache::row(std::string_view table,
                                                               std::string_view row_key) const {
  if (!table.empty()) {
    auto it = rows_.find({std::string(table), std::string(row_key)});
    return it == rows_.end() ? nullptr : &it->second;
  }
  for (const auto& [key, cols] : rows_) {
    if (key.second == row_key) return &cols;
  }
  return nullptr;
}

const Vec* RowAttributeCache::get(std::string_view table, std::string_view row_key,
                                  std::string_view column) const {
  const ColumnVectors* r = row(table, row_key);
  if (!r) return nullptr;
  auto it = r->find(std::string(column));
  return it == r->end() ? nullptr : &it->second;
}

void extend_row_attribute_cache(RowAttributeCache& cache, const RelationalTable& table,
                                const TableEncoders& encoders, const EmbeddingModel& model,
                                OovPolicy policy, const StopWords& stop_words) {
  const std::size_t key_col = table.key_column();
  std::size_t skipped_total = 0;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    const std::string key = normalize_key(cell_to_string(table.rows()[r][key_col]));
    for (std::size_t c = 0; c < table.num_columns(); ++c) {
      if (c == key_col) continue;
      const auto tokens = cell_tokens(table, encoders, r, c, stop_words);
      std::size_t skipped = 0;
      cache.put(table.name(), key, column_token(table.columns()[c].name),
                average_tokens(tokens, model, policy, &skipped));
      skipped_total += skipped;
    }
  }
  if (skipped_total > 0) {
    util::log(util::LogLevel::kWarn, "row_cache_oov",
              {{"table", table.name()}, {"skipped_tokens", std::to_string(skipped_total)}});
  }
}

RowAttributeCache build_row_attribute_cache(const RelationalTable& table,
                                            const TableEncoders& encoders,
                                            const EmbeddingModel& model, OovPolicy policy,
                                            const StopWords& stop_words) {
  RowAttributeCache cache(model.dim());
  extend_row_attribute_cache(cache, table, encoders, model, policy, stop_words);
  return cache;
}

std::string serialize_row_cache(const RowAttributeCache& cache) {
  std::string out(kMagic);
  out.push_back('\0');
  put_u64(out, kVersion);
  put_string(out, cache.config_hash());
  put_u64(out, cache.dim());
  put_u64(out, cache.num_rows());
  for (const auto& [key, cols] : cache.rows()) {
    put_string(out, key.first);
    put_string(out, key.second);
    put_u64(out, cols.size());
    for (const auto& [col, vec] : cols) {
      put_string(out, col);
      for (double x : vec) put_u64(out, std::bit_cast<std::uint64_t>(x));
    }
  }
  return out;
}

RowAttributeCache parse_row_cache(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.raw(kMagic.size() + 1) != std::string(kMagic) + '\0') {
    throw FormatError("not a row cache file", 0);
  }
  const std::uint64_t version = r.u64();
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "row cache version " + std::to_string(version) + " is not supported");
  }
  std::string hash = r.str();
  const std::uint64_t dim = r.u64();
  const std::uint64_t rows = r.u64();
  RowAttributeCache cache(dim);
  cache.set_config_hash(std::move(hash));
  for (std::uint64_t i = 0; i < rows; ++i) {
    std::string table = r.str();
    std::string key = r.str();
    const std::uint64_t ncols = r.u64();
    for (std::uint64_t c = 0; c < ncols; ++c) {
      std::string col = r.str();
      Vec v(dim);
      for (double& x : v) x = std::bit_cast<double>(r.u64());
      cache.put(table, key, col, std::move(v));
    }
  }
  if (!r.at_end()) throw FormatError("trailing bytes in row cache", r.pos());
  return cache;
}

}  // namespace cogdb
