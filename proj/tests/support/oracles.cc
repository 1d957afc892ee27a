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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cogdb::oracle {

V raw(const EmbeddingModel& m, const std::string& token) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.token(i) == token) {
      auto s = m.vector(i);
      return V(s.begin(), s.end());
    }
  }
  throw std::out_of_range("oracle: no token " + token);
}

V mean(const std::vector<V>& vs) {
  V out(vs.at(0).size(), 0.0);
  for (const V& v : vs) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
  }
  for (double& x : out) x /= static_cast<double>(vs.size());
  return out;
}

V add(const V& a, const V& b) {
  V out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

V sub(const V& a, const V& b) {
  V out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

double dot(const V& a, const V& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cos(const V& a, const V& b) { return dot(a, b) / std::sqrt(dot(a, a) * dot(b, b)); }

V avg_tokens(const EmbeddingModel& m, const std::vector<std::string>& tokens) {
  std::vector<V> known;
  for (const std::string& t : tokens) {
    if (m.contains(t)) known.push_back(raw(m, t));
  }
  if (known.empty()) known.push_back(raw(m, "</s>"));
  return mean(known);
}

double cos_add(const V& x, const V& y, const V& q, const V& w) {
  return cos(w, sub(add(q, y), x));
}

double pair_direction(const V& x, const V& y, const V& q, const V& w) {
  return cos(sub(w, q), sub(y, x));
}

double cos_mul(const V& x, const V& y, const V& q, const V& w, double eps) {
  auto s = [](double c) { return (c + 1.0) / 2.0; };
  return s(cos(w, q)) * s(cos(w, y)) / (s(cos(w, x)) + eps);
}

std::string best_analogy(const EmbeddingModel& m, const V& x, const V& y, const V& q, int method,
                         const std::set<std::string>& excluded, double eps) {
  std::string best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string& t = m.token(i);
    if (t == "</s>" || excluded.count(t)) continue;
    const V w = raw(m, t);
    double s = 0.0;
    if (method == 1) {
      s = cos_add(x, y, q, w);
    } else if (method == 2) {
      s = pair_direction(x, y, q, w);
    } else {
      s = cos_mul(x, y, q, w, eps);
    }
    if (s > best_score || (s == best_score && t < best)) {
      best = t;
      best_score = s;
    }
  }
  return best;
}

std::vector<std::pair<std::string, double>> top_k(const EmbeddingModel& m, const V& q,
                                                  std::size_t k,
                                                  const std::set<std::string>& excluded) {
  std::vector<std::pair<std::string, double>> all;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string& t = m.token(i);
    if (t == "</s>" || excluded.count(t)) continue;
    all.emplace_back(t, cos(q, raw(m, t)));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<double> best_two_means(const std::vector<double>& values) {
  const std::size_t n = values.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> out;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    double s[2] = {0, 0};
    int c[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1;
      s[g] += values[i];
      ++c[g];
    }
    const double m0 = s[0] / c[0], m1 = s[1] / c[1];
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = ((mask >> i) & 1) ? m1 : m0;
      sse += (values[i] - m) * (values[i] - m);
    }
    if (sse < best) {
      best = sse;
      out = {std::min(m0, m1), std::max(m0, m1)};
    }
  }
  return out;
}

}  // namespace cogdb::oracle
