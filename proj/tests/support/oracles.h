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

#ifndef COGDB_TESTS_ORACLES_H_
#define COGDB_TESTS_ORACLES_H_

// Reference arithmetic written straight from the definitions, sharing no code
// with the library beyond reading raw vectors out of a model.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "cogdb/embedding.h"

namespace cogdb::oracle {

using V = std::vector<double>;

V raw(const EmbeddingModel& m, const std::string& token);  // throws std::out_of_range
V mean(const std::vector<V>& vs);
V add(const V& a, const V& b);
V sub(const V& a, const V& b);
double dot(const V& a, const V& b);
double cos(const V& a, const V& b);

// Mean of the vectors of the known tokens; `</s>` when none are known.
V avg_tokens(const EmbeddingModel& m, const std::vector<std::string>& tokens);

double cos_add(const V& x, const V& y, const V& q, const V& w);
double pair_direction(const V& x, const V& y, const V& q, const V& w);
double cos_mul(const V& x, const V& y, const V& q, const V& w, double eps);

// 1 = 3COSADD, 2 = PAIRDIRECTION, 3 = 3COSMUL. Scans every vocabulary token
// except `</s>` and `excluded`; ties go to the smaller token.
std::string best_analogy(const EmbeddingModel& m, const V& x, const V& y, const V& q, int method,
                         const std::set<std::string>& excluded, double eps = 0.001);

// Top-k tokens by cosine to `q`, same exclusions and tie rule.
std::vector<std::pair<std::string, double>> top_k(const EmbeddingModel& m, const V& q,
                                                  std::size_t k,
                                                  const std::set<std::string>& excluded = {});

// Minimum within-cluster squared error over every assignment of `values` to
// two non-empty clusters; returns the two cluster means ascending.
std::vector<double> best_two_means(const std::vector<double>& values);

}  // namespace cogdb::oracle

#endif  // COGDB_TESTS_ORACLES_H_
