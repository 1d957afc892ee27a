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

#include "cogdb/udf.h"

#include <algorithm>
#include <cmath>

#include "cogdb/error.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

template <typename T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine of vectors with " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + " components");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i], y = b[i];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

Vec key_vector(std::string_view token, const EmbeddingModel& model) {
  auto v = model.lookup(token);
  if (!v) throw Error(ErrorCode::kUnknownKey, "token '" + std::string(token) + "' not in model");
  return to_vec(*v);
}

Vec mean_of(const std::vector<Vec>& vs) {
  Vec out(vs.front().size(), 0.0);
  for (const Vec& v : vs) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += v[k];
  }
  for (double& x : out) x /= static_cast<double>(vs.size());
  return out;
}

bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double shifted(double c) { return (c + 1.0) / 2.0; }

struct Scored {
  std::string token;
  double score;
};

void sort_scored(std::vector<Scored>& v) {
  std::sort(v.begin(), v.end(), [](const Scored& a, const Scored& b) {
    return a.score != b.score ? a.score > b.score : a.token < b.token;
  });
}

std::vector<std::string> candidate_pool(const EmbeddingModel& model,
                                        const std::vector<std::string>& candidates) {
  std::vector<std::string> pool;
  if (candidates.empty()) {
    for (const std::string& t : model.vocab()) {
      if (t != kSentinelToken) pool.push_back(t);
    }
  } else {
    for (const std::string& t : candidates) {
      if (t != kSentinelToken && model.contains(t)) pool.push_back(t);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  return pool;
}

const Vec& cached_column(const RowAttributeCache& cache, std::string_view table,
                         std::string_view key, std::string_view column) {
  if (!cache.row(table, key)) {
    throw Error(ErrorCode::kUnknownKey, "row '" + std::string(key) + "' not in attribute cache");
  }
  const Vec* v = cache.get(table, key, column);
  if (!v) {
    throw Error(ErrorCode::kUnknownKey, "row '" + std::string(key) + "' has no column '" +
                                            std::string(column) + "' in attribute cache");
  }
  return *v;
}

Vec ext_sentinel(const EmbeddingModel& ext_model) {
  auto v = ext_model.lookup(kSentinelToken);
  if (!v) throw Error(ErrorCode::kAllTokensUnknown, "external model has no </s> vector");
  return to_vec(*v);
}

Vec concept_vector(std::string_view concept_name, const EmbeddingModel& ext_model) {
  if (auto v = ext_model.lookup(concept_name)) return to_vec(*v);
  if (auto v = ext_model.lookup(concept_token(concept_name))) return to_vec(*v);
  throw Error(ErrorCode::kUnknownConcept,
              "concept '" + std::string(concept_name) + "' not in external model");
}

}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) {
  return cosine_impl(a, b);
}

double cosine(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }

int string_present(const Tokens& param_a, std::string_view param_b) {
  return std::find(param_a.begin(), param_a.end(), param_b) != param_a.end() ? 1 : 0;
}

Vec avg_vector(const Tokens& tokens, const EmbeddingModel& model, OovPolicy policy) {
  return average_tokens(tokens, model, policy);
}

double proximity_avg(const Tokens& a, const Tokens& b, const EmbeddingModel& model,
                     OovPolicy policy) {
  return cosine(avg_vector(a, model, policy), avg_vector(b, model, policy));
}

double token_cosine(std::string_view a, std::string_view b, const EmbeddingModel& model,
                    OovPolicy policy) {
  return proximity_avg({std::string(a)}, {std::string(b)}, model, policy);
}

double combined_avg_sim(std::string_view candidate, std::string_view in1, std::string_view in2,
                        std::string_view in3, const EmbeddingModel& model) {
  const Vec input =
      mean_of({key_vector(in1, model), key_vector(in2, model), key_vector(in3, model)});
  return cosine(input, key_vector(candidate, model));
}

double attribute_sim_avg(std::string_view in1, std::string_view in2, std::string_view in3,
                         std::string_view candidate, int flag, const RowAttributeCache& cache,
                         const EmbeddingModel& model, std::string_view table,
                         AttributeTrace* trace) {
  static const std::vector<std::string> kBC = {"classb", "classc"};
  static const std::vector<std::string> kBCD = {"classb", "classc", "classd"};
  static const std::vector<std::string> kD = {"classd"};
  const std::vector<std::string>* input_cols = nullptr;
  const std::vector<std::string>* candidate_cols = nullptr;
  switch (flag) {
    case 1: input_cols = &kBC; candidate_cols = &kBC; break;
    case 2: input_cols = &kBC; candidate_cols = &kD; break;
    case 3: input_cols = &kBCD; candidate_cols = &kBCD; break;
    case 4: input_cols = &kBCD; break;
    default:
      throw Error(ErrorCode::kInvalidFlag,
                  "attributeSimAvg flag must be 1..4, got " + std::to_string(flag));
  }

  std::vector<Vec> inputs;
  for (std::string_view key : {in1, in2, in3}) {
    for (const std::string& col : *input_cols) {
      inputs.push_back(cached_column(cache, table, key, col));
    }
  }
  std::vector<Vec> targets;
  if (candidate_cols) {
    for (const std::string& col : *candidate_cols) {
      targets.push_back(cached_column(cache, table, candidate, col));
    }
  } else {
    targets.push_back(key_vector(candidate, model));
  }
  if (trace) {
    trace->input_vectors = inputs.size();
    trace->candidate_vectors = targets.size();
  }
  return cosine(mean_of(inputs), mean_of(targets));
}

AnalogyMethod analogy_method_from_flag(int flag) {
  switch (flag) {
    case 1: return AnalogyMethod::kCosAdd;
    case 2: return AnalogyMethod::kPairDirection;
    case 3: return AnalogyMethod::kCosMul;
    default:
      throw Error(ErrorCode::kInvalidFlag,
                  "analogy flag must be 1, 2 or 3, got " + std::to_string(flag));
  }
}

std::string_view analogy_method_name(AnalogyMethod method) {
  switch (method) {
    case AnalogyMethod::kCosAdd: return "3COSADD";
    case AnalogyMethod::kPairDirection: return "PAIRDIRECTION";
    case AnalogyMethod::kCosMul: return "3COSMUL";
  }
  return "?";
}

double analogy_score(std::span<const double> x, std::span<const double> y,
                     std::span<const double> q, std::span<const double> w,
                     AnalogyMethod method, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kConfig, "epsilon must be positive");
  const std::size_t n = w.size();
  if (x.size() != n || y.size() != n || q.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "analogy vectors differ in dimension");
  }
  switch (method) {
    case AnalogyMethod::kCosAdd: {
      Vec target(n);
      for (std::size_t k = 0; k < n; ++k) target[k] = q[k] + y[k] - x[k];
      return cosine(w, target);
    }
    case AnalogyMethod::kPairDirection: {
      Vec d1(n), d2(n);
      for (std::size_t k = 0; k < n; ++k) {
        d1[k] = w[k] - q[k];
        d2[k] = y[k] - x[k];
      }
      if (is_zero(d2)) throw Error(ErrorCode::kDegenerateDirection, "y equals x");
      if (is_zero(d1)) throw Error(ErrorCode::kDegenerateDirection, "w equals q");
      return cosine(d1, d2);
    }
    case AnalogyMethod::kCosMul: {
      const double wq = shifted(cosine(w, q));
      const double wy = shifted(cosine(w, y));
      const double wx = shifted(cosine(w, x));
      return wq * wy / (wx + epsilon);
    }
  }
  throw Error(ErrorCode::kInvalidFlag, "unknown analogy method");
}

double analogy_query(std::string_view a, std::string_view b, std::string_view c,
                     const Tokens& d, int flag, const EmbeddingModel& model, OovPolicy policy,
                     double epsilon) {
  const AnalogyMethod method = analogy_method_from_flag(flag);
  const Vec x = key_vector(a, model);
  const Vec y = key_vector(b, model);
  const Vec q = key_vector(c, model);
  const Vec w = avg_vector(d, model, policy);
  return analogy_score(x, y, q, w, method, epsilon);
}

double analogy_sequence(std::string_view a, std::string_view b, std::string_view c,
                        std::string_view d, std::string_view e, const Tokens& f, int flag,
                        const EmbeddingModel& model, OovPolicy policy, double epsilon) {
  const AnalogyMethod method = analogy_method_from_flag(flag);
  const Vec x = mean_of({key_vector(a, model), key_vector(c, model)});
  const Vec y = mean_of({key_vector(b, model), key_vector(d, model)});
  const Vec q = key_vector(e, model);
  const Vec w = avg_vector(f, model, policy);
  return analogy_score(x, y, q, w, method, epsilon);
}

double semantic_cluster_score(const Tokens& inputs, std::string_view candidate,
                              const EmbeddingModel& model) {
  if (inputs.empty()) throw Error(ErrorCode::kUdf, "semantic clustering needs input tokens");
  std::vector<Vec> vs;
  for (const std::string& t : inputs) vs.push_back(key_vector(t, model));
  return cosine(mean_of(vs), key_vector(candidate, model));
}

std::vector<ClusteredAnalogy> clustered_analogies(
    const std::vector<std::pair<std::string, std::string>>& pairs, std::size_t k_sources,
    std::size_t k_targets, const EmbeddingModel& model,
    const std::vector<std::string>& candidates, double epsilon) {
  if (pairs.empty()) throw Error(ErrorCode::kUdf, "clustered analogies need input pairs");
  std::vector<Vec> sources, targets;
  std::vector<std::string> input_tokens;
  for (const auto& [s, t] : pairs) {
    sources.push_back(key_vector(s, model));
    targets.push_back(key_vector(t, model));
    input_tokens.push_back(s);
    input_tokens.push_back(t);
  }
  const Vec x = mean_of(sources);
  const Vec y = mean_of(targets);
  const std::vector<std::string> pool = candidate_pool(model, candidates);
  auto is_input = [&](const std::string& t) {
    return std::find(input_tokens.begin(), input_tokens.end(), t) != input_tokens.end();
  };

  std::vector<Scored> ranked_sources;
  for (const std::string& t : pool) {
    if (std::any_of(pairs.begin(), pairs.end(), [&](const auto& p) { return p.first == t; })) {
      continue;
    }
    ranked_sources.push_back({t, cosine(x, key_vector(t, model))});
  }
  sort_scored(ranked_sources);
  if (ranked_sources.size() > k_sources) ranked_sources.resize(k_sources);

  std::vector<ClusteredAnalogy> out;
  for (const Scored& src : ranked_sources) {
    const Vec q = key_vector(src.token, model);
    std::vector<Scored> ranked;
    for (const std::string& t : pool) {
      if (t == src.token || is_input(t)) continue;
      ranked.push_back(
          {t, analogy_score(x, y, q, key_vector(t, model), AnalogyMethod::kCosMul, epsilon)});
    }
    sort_scored(ranked);
    ClusteredAnalogy entry{src.token, {}};
    for (std::size_t i = 0; i < ranked.size() && i < k_targets; ++i) {
      entry.targets.push_back(ranked[i].token);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::string odd_man_out(const Tokens& items, const EmbeddingModel& model) {
  if (items.size() < 3) throw Error(ErrorCode::kUdf, "odd-man-out needs at least 3 items");
  std::vector<Vec> vs;
  for (const std::string& t : items) vs.push_back(key_vector(t, model));
  std::string best;
  double best_score = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (i != j) total += cosine(vs[i], vs[j]);
    }
    const double mean = total / static_cast<double>(items.size() - 1);
    if (best.empty() || mean < best_score || (mean == best_score && items[i] < best)) {
      best = items[i];
      best_score = mean;
    }
  }
  return best;
}

std::string capitalize_first(std::string_view token) {
  std::string out(token);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
  return out;
}

std::string concept_token(std::string_view token) { return "CONCEPT_" + capitalize_first(token); }

double proximity_avg_for_ext_kb(std::string_view concept_name, const Tokens& param_b,
                                const EmbeddingModel& ext_model) {
  const Vec c = concept_vector(concept_name, ext_model);
  std::vector<Vec> resolved;
  for (const std::string& t : param_b) {
    if (auto v = ext_model.lookup(concept_token(t))) {
      resolved.push_back(to_vec(*v));
    } else {
      resolved.push_back(ext_sentinel(ext_model));
    }
  }
  if (resolved.empty()) resolved.push_back(ext_sentinel(ext_model));
  return cosine(c, mean_of(resolved));
}

double proximity_avg_adv_for_ext_kb(std::string_view concept_name, const Tokens& param_b,
                                    const EmbeddingModel& ext_model) {
  const Vec c = concept_vector(concept_name, ext_model);
  std::vector<Vec> resolved;
  for (const std::string& t : param_b) {
    auto joined = ext_model.lookup(concept_token(t));
    auto plain = ext_model.lookup(t);
    if (joined && plain) {
      resolved.push_back(mean_of({to_vec(*joined), to_vec(*plain)}));
    } else if (joined) {
      resolved.push_back(to_vec(*joined));
    } else {
      resolved.push_back(ext_sentinel(ext_model));
    }
  }
  if (resolved.empty()) resolved.push_back(ext_sentinel(ext_model));
  return cosine(c, mean_of(resolved));
}

}  // namespace cogdb
