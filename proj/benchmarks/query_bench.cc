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

#include <string>

#include "benchmark/benchmark.h"
#include "cogdb/query/executor.h"
#include "cogdb/query/parser.h"
#include "support/query_oracles.h"

namespace cogdb {
namespace {

const oracle::QueryWorld& world() {
  static const oracle::QueryWorld w = oracle::random_world(64, 1);
  return w;
}

void run(benchmark::State& state, const std::string& sql) {
  const auto& w = world();
  query::ExecOptions opt;
  opt.udf.model = &w.model;
  for (auto _ : state) {
    benchmark::DoNotOptimize(query::run_query(sql, w.catalog, opt));
  }
}

void BM_SimilarityJoin(benchmark::State& state) { run(state, oracle::similarity_sql("0.1")); }
BENCHMARK(BM_SimilarityJoin);

void BM_Prediction(benchmark::State& state) { run(state, oracle::prediction_sql("0.1", 10)); }
BENCHMARK(BM_Prediction);

void BM_Olap(benchmark::State& state) { run(state, oracle::olap_sql("0.1")); }
BENCHMARK(BM_Olap);

void BM_TokenEntities(benchmark::State& state) { run(state, oracle::entity_sql("0.1")); }
BENCHMARK(BM_TokenEntities);

void BM_Parse(benchmark::State& state) {
  const std::string sql = oracle::similarity_sql("0.5");
  for (auto _ : state) benchmark::DoNotOptimize(query::parse(sql));
}

BENCHMARK(BM_Parse);

}  // namespace
}  // namespace cogdb
