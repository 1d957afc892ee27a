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

#include "cogdb/ann.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "cogdb/error.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/rng.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

constexpr std::string_view kIndexMagic = "CGDBIDX";
constexpr std::uint64_t kIndexVersion = 1;
constexpr std::uint8_t kTypeLsh = 1;
constexpr std::uint8_t kTypeKMeans = 2;

double dot(std::span<const float> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

void check_dim(std::size_t got, std::size_t want) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch, "query has " + std::to_string(got) +
                                                   " components, model has " +
                                                   std::to_string(want));
  }
}

bool better(double sa, const std::string& ta, double sb, const std::string& tb) {
  return sa != sb ? sa > sb : ta < tb;
}

// Keeps the best k of (index, score) pairs, skipping excluded tokens.
TopKResult rank(const EmbeddingModel& model, const std::vector<std::size_t>& candidates,
                const std::vector<double>& scores, std::size_t k,
                const std::unordered_set<std::string>& excluded, bool exact) {
  std::vector<std::size_t> keep;
  keep.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::string& t = model.token(candidates[i]);
    if (t == kSentinelToken || excluded.count(t)) continue;
    if (std::isnan(scores[i])) continue;
    keep.push_back(i);
  }
  auto cmp = [&](std::size_t a, std::size_t b) {
    return better(scores[a], model.token(candidates[a]), scores[b], model.token(candidates[b]));
  };
  const std::size_t n = std::min(k, keep.size());
  std::partial_sort(keep.begin(), keep.begin() + static_cast<std::ptrdiff_t>(n), keep.end(), cmp);
  TopKResult out;
  out.exact = exact;
  out.candidates_scored = candidates.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = candidates[keep[i]];
    out.entries.push_back({model.token(c), scores[keep[i]], c});
  }
  return out;
}

std::vector<double> row_norms(const EmbeddingModel& model) {
  std::vector<double> out(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) out[i] = norm(model.vector(i));
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

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
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(b_[pos_++]);
  }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == b_.size(); }
  // Guards element counts read from the file against its real size.
  void need_elements(std::uint64_t count, std::size_t width) const {
    if (count > (b_.size() - pos_) / width) throw FormatError("truncated index file", pos_);
  }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw FormatError("truncated index file", pos_);
  }
  std::string_view b_;
  std::size_t pos_ = 0;
};

std::string index_header(std::uint8_t type, std::uint64_t seed, std::uint32_t fingerprint) {
  std::string out(kIndexMagic);
  out.push_back('\0');
  put_u64(out, kIndexVersion);
  out.push_back(static_cast<char>(type));
  put_u64(out, seed);
  put_u64(out, fingerprint);
  return out;
}

}  // namespace

std::vector<double> batch_scores(std::span<const double> query, const EmbeddingModel& model) {
  check_dim(query.size(), model.dim());
  std::vector<double> out(model.size());
  const float* m = model.data().data();
  const std::size_t d = model.dim();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const float* row = m + i * d;
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += static_cast<double>(row[k]) * query[k];
    out[i] = s;
  }
  return out;
}

std::vector<std::size_t> candidate_indices(std::span<const double> query,
                                       const EmbeddingModel& model, const Strategy& strategy,
                                       const AnnIndexSet& indices) {
  switch (strategy.kind) {
    case Strategy::Kind::kExact:
      return all_indices(model.size());
    case Strategy::Kind::kLsh:
      if (!indices.lsh) throw Error(ErrorCode::kConfig, "lsh strategy needs an LSH index");
      if (indices.lsh->signatures.size() != model.size()) {
        throw Error(ErrorCode::kConfig, "LSH index does not match the model");
      }
      return lsh_candidates(*indices.lsh, query, strategy.radius);
    case Strategy::Kind::kKMeans: {
      const SphericalKMeansIndex* km = indices.kmeans;
      if (!km) throw Error(ErrorCode::kConfig, "kmeans strategy needs a k-means index");
      if (km->assignment.size() != model.size()) {
        throw Error(ErrorCode::kConfig, "k-means index does not match the model");
      }
      std::vector<std::pair<double, std::size_t>> cs;
      for (std::size_t c = 0; c < km->k; ++c) {
        double s = 0.0;
        auto cen = km->centroid(c);
        for (std::size_t i = 0; i < query.size(); ++i) s += cen[i] * query[i];
        cs.push_back({s, c});
      }
      std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      const std::size_t probes = std::min<std::size_t>(std::max(strategy.n_probe, 1), km->k);
      std::vector<char> chosen(km->k, 0);
      for (std::size_t p = 0; p < probes; ++p) chosen[cs[p].second] = 1;
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < km->assignment.size(); ++i) {
        if (chosen[km->assignment[i]]) out.push_back(i);
      }
      return out;
    }
  }
  return {};
}

std::uint64_t LshIndex::signature(std::span<const double> v) const {
  check_dim(v.size(), dim);
  std::uint64_t sig = 0;
  for (int b = 0; b < bits; ++b) {
    const double* p = planes.data() + static_cast<std::size_t>(b) * dim;
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += p[k] * v[k];
    if (s >= 0.0) sig |= (std::uint64_t{1} << b);
  }
  return sig;
}

std::uint64_t LshIndex::signature(std::span<const float> v) const {
  std::vector<double> d(v.begin(), v.end());
  return signature(std::span<const double>(d));
}

void LshIndex::rebuild_buckets() {
  buckets.clear();
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    buckets[signatures[i]].push_back(static_cast<std::uint32_t>(i));
  }
}

LshIndex build_lsh(const EmbeddingModel& model, int bits, std::uint64_t seed) {
  if (bits < 1 || bits > 64) {
    throw Error(ErrorCode::kConfig, "LSH bits must be in 1..64, got " + std::to_string(bits));
  }
  LshIndex index;
  index.bits = bits;
  index.seed = seed;
  index.dim = model.dim();
  util::SplitMix64 rng(seed);
  index.planes.resize(static_cast<std::size_t>(bits) * index.dim);
  for (double& p : index.planes) p = rng.normal();
  index.signatures.reserve(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    index.signatures.push_back(index.signature(model.vector(i)));
  }
  index.rebuild_buckets();
  return index;
}

int hamming_distance(std::uint64_t a, std::uint64_t b) { return std::popcount(a ^ b); }

std::vector<std::size_t> lsh_candidates(const LshIndex& index, std::span<const double> query,
                                        int radius) {
  if (radius < 0 || radius > 2) {
    throw Error(ErrorCode::kConfig, "LSH radius must be 0, 1 or 2");
  }
  const std::uint64_t sig = index.signature(query);
  std::vector<std::size_t> out;
  auto take = [&](std::uint64_t s) {
    auto it = index.buckets.find(s);
    if (it == index.buckets.end()) return;
    out.insert(out.end(), it->second.begin(), it->second.end());
  };
  take(sig);
  if (radius >= 1) {
    for (int i = 0; i < index.bits; ++i) take(sig ^ (std::uint64_t{1} << i));
  }
  if (radius >= 2) {
    for (int i = 0; i < index.bits; ++i) {
      for (int j = i + 1; j < index.bits; ++j) {
        take(sig ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::uint32_t>> SphericalKMeansIndex::members() const {
  std::vector<std::vector<std::uint32_t>> out(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    out[assignment[i]].push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

SphericalKMeansIndex spherical_kmeans(const EmbeddingModel& model, std::size_t k, int max_iters,
                                      std::uint64_t seed) {
  const std::size_t n = model.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kInvalidK, "k must be in 1.." + std::to_string(n) + ", got " +
                                          std::to_string(k));
  }
  const std::size_t d = model.dim();
  SphericalKMeansIndex idx;
  idx.k = k;
  idx.seed = seed;
  idx.dim = d;
  idx.centroids.assign(k * d, 0.0);
  idx.assignment.assign(n, 0);

  // Unit copies of the data so that dot products are cosines.
  std::vector<double> unit(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = model.vector(i);
    const double nv = norm(v);
    for (std::size_t j = 0; j < d; ++j) unit[i * d + j] = nv > 0.0 ? v[j] / nv : 0.0;
  }
  auto row = [&](std::size_t i) { return std::span<const double>(unit.data() + i * d, d); };
  auto cdot = [&](std::size_t c, std::size_t i) {
    const double* cp = idx.centroids.data() + c * d;
    const double* vp = unit.data() + i * d;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += cp[j] * vp[j];
    return s;
  };

  util::SplitMix64 rng(seed);
  std::vector<std::size_t> perm = all_indices(n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
    auto v = row(perm[i]);
    std::copy(v.begin(), v.end(), idx.centroids.begin() + static_cast<std::ptrdiff_t>(i * d));
  }

  auto assign = [&]() {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t best = 0;
      double best_s = cdot(0, i);
      for (std::size_t c = 1; c < k; ++c) {
        const double s = cdot(c, i);
        if (s > best_s) {
          best_s = s;
          best = static_cast<std::uint32_t>(c);
        }
      }
      if (idx.assignment[i] != best) changed = true;
      idx.assignment[i] = best;
    }
    return changed;
  };

  auto update = [&](std::size_t c) {
    std::vector<double> sum(d, 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (idx.assignment[i] != c) continue;
      ++count;
      for (std::size_t j = 0; j < d; ++j) sum[j] += unit[i * d + j];
    }
    const double ns = norm(sum);
    if (count == 0 || ns == 0.0) return count;
    for (std::size_t j = 0; j < d; ++j) idx.centroids[c * d + j] = sum[j] / ns;
    return count;
  };

  auto objective = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cdot(idx.assignment[i], i);
    return s;
  };

  assign();
  for (int it = 0; it < max_iters; ++it) {
    std::vector<std::size_t> sizes(k);
    for (std::size_t c = 0; c < k; ++c) sizes[c] = update(c);
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      double far_s = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[idx.assignment[i]] < 2) continue;
        const double s = cdot(idx.assignment[i], i);
        if (s < far_s) {
          far_s = s;
          far = i;
        }
      }
      if (far == n) break;
      const std::size_t old = idx.assignment[far];
      idx.assignment[far] = static_cast<std::uint32_t>(c);
      --sizes[old];
      sizes[c] = 1;
      auto v = row(far);
      std::copy(v.begin(), v.end(), idx.centroids.begin() + static_cast<std::ptrdiff_t>(c * d));
      update(old);
    }
    idx.objective_history.push_back(objective());
    idx.iterations = it + 1;
    if (!assign()) break;
  }
  return idx;
}

Strategy Strategy::parse(std::string_view text) {
  const std::string t = util::to_lower(util::trim(text));
  if (t == "exact") return exact();
  const auto colon = t.find(':');
  const std::string kind = t.substr(0, colon);
  int param = -1;
  if (colon != std::string::npos) {
    double v = 0.0;
    if (!util::parse_double(t.substr(colon + 1), v) || v != std::floor(v) || v < 0 || v > 1e6) {
      throw Error(ErrorCode::kConfig, "bad strategy parameter in '" + std::string(text) + "'");
    }
    param = static_cast<int>(v);
  }
  if (kind == "lsh") {
    const int r = param < 0 ? 2 : param;
    if (r > 2) throw Error(ErrorCode::kConfig, "LSH radius must be 0, 1 or 2");
    return lsh(r);
  }
  if (kind == "kmeans") {
    const int p = param < 0 ? 1 : param;
    if (p < 1) throw Error(ErrorCode::kConfig, "kmeans probes must be >= 1");
    return kmeans(p);
  }
  throw Error(ErrorCode::kConfig,
              "unknown strategy '" + std::string(text) + "' (exact, lsh:R, kmeans:N)");
}

std::string Strategy::to_string() const {
  switch (kind) {
    case Kind::kExact: return "exact";
    case Kind::kLsh: return "lsh:" + std::to_string(radius);
    case Kind::kKMeans: return "kmeans:" + std::to_string(n_probe);
  }
  return "exact";
}

TopKResult top_k(std::span<const double> query, std::size_t k, const EmbeddingModel& model,
                 const Strategy& strategy, const AnnIndexSet& indices,
                 const std::unordered_set<std::string>& excluded) {
  check_dim(query.size(), model.dim());
  if (k < 1) throw Error(ErrorCode::kInvalidK, "k must be at least 1");
  const double qn = norm(query);
  if (qn == 0.0) throw Error(ErrorCode::kZeroVector, "top-k query is a zero vector");
  const std::vector<std::size_t> cand = candidate_indices(query, model, strategy, indices);
  std::vector<double> scores(cand.size());
  if (strategy.kind == Strategy::Kind::kExact) {
    const std::vector<double> dots = batch_scores(query, model);
    const std::vector<double> norms = row_norms(model);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      scores[i] = norms[cand[i]] > 0.0 ? dots[cand[i]] / (qn * norms[cand[i]])
                                       : std::numeric_limits<double>::quiet_NaN();
    }
  } else {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      auto v = model.vector(cand[i]);
      const double nv = norm(v);
      scores[i] = nv > 0.0 ? dot(v, query) / (qn * nv) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rank(model, cand, scores, k, excluded, strategy.kind == Strategy::Kind::kExact);
}

TopKResult solve_analogy(std::span<const double> x, std::span<const double> y,
                         std::span<const double> q, AnalogyMethod method, std::size_t k,
                         const EmbeddingModel& model, const Strategy& strategy,
                         const AnnIndexSet& indices,
                         const std::unordered_set<std::string>& excluded, double epsilon) {
  const std::size_t d = model.dim();
  check_dim(x.size(), d);
  check_dim(y.size(), d);
  check_dim(q.size(), d);
  if (k < 1) throw Error(ErrorCode::kInvalidK, "k must be at least 1");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kConfig, "epsilon must be positive");

  std::vector<double> ideal(d), dir(d);
  for (std::size_t j = 0; j < d; ++j) {
    ideal[j] = q[j] + y[j] - x[j];
    dir[j] = y[j] - x[j];
  }
  const double xn = norm(x), yn = norm(y), qn = norm(q);
  if (xn == 0.0 || yn == 0.0 || qn == 0.0) {
    throw Error(ErrorCode::kZeroVector, "analogy input is a zero vector");
  }
  const double dn = norm(dir);
  if (method == AnalogyMethod::kPairDirection && dn == 0.0) {
    throw Error(ErrorCode::kDegenerateDirection, "y equals x");
  }
  const double in = norm(ideal);
  if (method == AnalogyMethod::kCosAdd && in == 0.0) {
    throw Error(ErrorCode::kZeroVector, "q + y - x is a zero vector");
  }

  std::vector<std::size_t> cand;
  if (strategy.kind == Strategy::Kind::kExact) {
    cand = all_indices(model.size());
  } else {
    std::span<const double> probe = in > 0.0 ? std::span<const double>(ideal) : q;
    cand = candidate_indices(probe, model, strategy, indices);
  }

  const std::vector<double> norms = row_norms(model);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> scores(cand.size(), kNaN);
  auto shifted = [](double c) { return (c + 1.0) / 2.0; };
  auto clampc = [](double c) { return std::clamp(c, -1.0, 1.0); };

  if (strategy.kind == Strategy::Kind::kExact) {
    // Every score is a function of a few dot products per token.
    const std::vector<double> sq = batch_scores(q, model);
    switch (method) {
      case AnalogyMethod::kCosMul: {
        const std::vector<double> sx = batch_scores(x, model);
        const std::vector<double> sy = batch_scores(y, model);
        for (std::size_t i = 0; i < cand.size(); ++i) {
          const double wn = norms[i];
          if (wn == 0.0) continue;
          const double cq = clampc(sq[i] / (wn * qn));
          const double cy = clampc(sy[i] / (wn * yn));
          const double cx = clampc(sx[i] / (wn * xn));
          scores[i] = shifted(cq) * shifted(cy) / (shifted(cx) + epsilon);
        }
        break;
      }
      case AnalogyMethod::kCosAdd: {
        const std::vector<double> st = batch_scores(ideal, model);
        for (std::size_t i = 0; i < cand.size(); ++i) {
          if (norms[i] == 0.0) continue;
          scores[i] = clampc(st[i] / (norms[i] * in));
        }
        break;
      }
      case AnalogyMethod::kPairDirection: {
        const std::vector<double> sd = batch_scores(dir, model);
        double qd = 0.0;
        for (std::size_t j = 0; j < d; ++j) qd += q[j] * dir[j];
        for (std::size_t i = 0; i < cand.size(); ++i) {
          const double wn = norms[i];
          const double diff2 = wn * wn + qn * qn - 2.0 * sq[i];
          if (!(diff2 > 0.0)) continue;
          scores[i] = clampc((sd[i] - qd) / (std::sqrt(diff2) * dn));
        }
        break;
      }
    }
  } else {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const auto v = to_vec(model.vector(cand[i]));
      try {
        scores[i] = analogy_score(x, y, q, v, method, epsilon);
      } catch (const Error&) {
        // zero or degenerate candidates are simply not eligible
      }
    }
  }
  return rank(model, cand, scores, k, excluded, strategy.kind == Strategy::Kind::kExact);
}

std::uint32_t model_fingerprint(const EmbeddingModel& model) {
  std::string buf = std::to_string(model.size()) + " " + std::to_string(model.dim()) + "\n";
  for (const std::string& t : model.vocab()) {
    buf += t;
    buf.push_back('\n');
  }
  const auto& data = model.data();
  const std::size_t off = buf.size();
  buf.resize(off + data.size() * sizeof(float));
  if (!data.empty()) std::memcpy(buf.data() + off, data.data(), data.size() * sizeof(float));
  return util::crc32(buf);
}

std::string serialize_lsh(const LshIndex& index, std::uint32_t fingerprint) {
  std::string out = index_header(kTypeLsh, index.seed, fingerprint);
  put_u64(out, static_cast<std::uint64_t>(index.bits));
  put_u64(out, index.dim);
  for (double p : index.planes) put_f64(out, p);
  put_u64(out, index.signatures.size());
  for (std::uint64_t s : index.signatures) put_u64(out, s);
  return out;
}

std::string serialize_kmeans(const SphericalKMeansIndex& index, std::uint32_t fingerprint) {
  std::string out = index_header(kTypeKMeans, index.seed, fingerprint);
  put_u64(out, index.k);
  put_u64(out, index.dim);
  put_u64(out, static_cast<std::uint64_t>(index.iterations));
  for (double c : index.centroids) put_f64(out, c);
  put_u64(out, index.assignment.size());
  for (std::uint32_t a : index.assignment) put_u64(out, a);
  put_u64(out, index.objective_history.size());
  for (double h : index.objective_history) put_f64(out, h);
  return out;
}

LoadedIndex parse_index(std::string_view bytes) {
  ByteReader r(bytes);
  if (bytes.size() < kIndexMagic.size() + 1 ||
      r.raw(kIndexMagic.size() + 1) != std::string(kIndexMagic) + '\0') {
    throw FormatError("not an index file", 0);
  }
  const std::uint64_t version = r.u64();
  if (version != kIndexVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "index version " + std::to_string(version) + " is not supported");
  }
  const std::uint8_t type = r.u8();
  const std::uint64_t seed = r.u64();
  LoadedIndex out;
  out.fingerprint = static_cast<std::uint32_t>(r.u64());
  if (type == kTypeLsh) {
    LshIndex idx;
    idx.seed = seed;
    const std::uint64_t bits = r.u64();
    if (bits < 1 || bits > 64) throw FormatError("bad LSH bit count", r.pos());
    idx.bits = static_cast<int>(bits);
    idx.dim = r.u64();
    r.need_elements(bits * idx.dim, 8);
    idx.planes.resize(bits * idx.dim);
    for (double& p : idx.planes) p = r.f64();
    const std::uint64_t n = r.u64();
    r.need_elements(n, 8);
    idx.signatures.resize(n);
    for (std::uint64_t& s : idx.signatures) s = r.u64();
    idx.rebuild_buckets();
    out.lsh = std::move(idx);
  } else if (type == kTypeKMeans) {
    SphericalKMeansIndex idx;
    idx.seed = seed;
    idx.k = r.u64();
    idx.dim = r.u64();
    idx.iterations = static_cast<int>(r.u64());
    r.need_elements(idx.k * idx.dim, 8);
    idx.centroids.resize(idx.k * idx.dim);
    for (double& c : idx.centroids) c = r.f64();
    const std::uint64_t n = r.u64();
    r.need_elements(n, 8);
    idx.assignment.resize(n);
    for (std::uint32_t& a : idx.assignment) {
      const std::uint64_t v = r.u64();
      if (v >= idx.k) throw FormatError("assignment out of range", r.pos());
      a = static_cast<std::uint32_t>(v);
    }
    const std::uint64_t h = r.u64();
    r.need_elements(h, 8);
    idx.objective_history.resize(h);
    for (double& x : idx.objective_history) x = r.f64();
    out.kmeans = std::move(idx);
  } else {
    throw FormatError("unknown index type " + std::to_string(type), kIndexMagic.size() + 9);
  }
  if (!r.at_end()) throw FormatError("trailing bytes in index file", r.pos());
  return out;
}

}  // namespace cogdb
