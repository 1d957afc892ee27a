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

#include "cogdb/query/functions.h"

#include <cmath>

#include "cogdb/error.h"
#include "cogdb/util/strings.h"

namespace cogdb::query {

namespace {

const EmbeddingModel& model_of(const UdfEnv& env) {
  if (!env.model) throw Error(ErrorCode::kConfig, "no embedding model loaded");
  return *env.model;
}

const EmbeddingModel& ext_model_of(const UdfEnv& env) {
  return env.ext_model ? *env.ext_model : model_of(env);
}

const std::string& single(const UdfArg& a, const char* what) {
  if (a.tokens.size() != 1) {
    throw Error(ErrorCode::kUdf, std::string(what) + " expects a single token, got " +
                                     std::to_string(a.tokens.size()) + " [" +
                                     util::join(a.tokens, " ") + "]");
  }
  return a.tokens.front();
}

int flag_of(const UdfArg& a) {
  double v = 0.0;
  if (a.number) {
    v = *a.number;
  } else if (a.tokens.size() != 1 || !util::parse_double(a.tokens.front(), v)) {
    throw Error(ErrorCode::kInvalidFlag, "flag argument must be an integer");
  }
  if (v != std::floor(v)) throw Error(ErrorCode::kInvalidFlag, "flag argument must be an integer");
  return static_cast<int>(v);
}

std::vector<FunctionSpec> make_registry() {
  std::vector<FunctionSpec> r;
  auto add = [&](std::string name, int lo, int hi, std::string sig, PruneShape prune,
                 std::function<double(std::span<const UdfArg>, const UdfEnv&)> fn) {
    r.push_back({std::move(name), FunctionKind::kUdf, lo, hi, std::move(sig), prune, -1,
                 std::move(fn)});
  };

  add("stringPresent", 2, 2, "stringPresent(text, token) -> 0|1", PruneShape::kNone,
      [](std::span<const UdfArg> a, const UdfEnv&) {
        return static_cast<double>(string_present(a[0].tokens, single(a[1], "stringPresent")));
      });
  auto prox = [](std::span<const UdfArg> a, const UdfEnv& env) {
    return proximity_avg(a[0].tokens, a[1].tokens, model_of(env), env.oov);
  };
  add("proximityAvg", 2, 2, "proximityAvg(text, text) -> [-1,1]", PruneShape::kAverage, prox);
  add("similarityUDF", 2, 2, "similarityUDF(text, text) -> [-1,1]", PruneShape::kAverage, prox);
  add("valueSimUDF", 2, 2, "valueSimUDF(value, value) -> [-1,1]", PruneShape::kAverage, prox);
  add("cosineDistance", 2, 2, "cosineDistance(token, token) -> [-1,1] (a similarity)",
      PruneShape::kAverage, prox);
  add("combinedAvgSim", 4, 4, "combinedAvgSim(candidate, in1, in2, in3) -> [-1,1]",
      PruneShape::kKeyCentroid, [](std::span<const UdfArg> a, const UdfEnv& env) {
        return combined_avg_sim(single(a[0], "combinedAvgSim"), single(a[1], "combinedAvgSim"),
                                single(a[2], "combinedAvgSim"), single(a[3], "combinedAvgSim"),
                                model_of(env));
      });
  r.back().prune_candidate_arg = 0;
  add("attributeSimAvg", 5, 5, "attributeSimAvg(in1, in2, in3, candidate, flag 1..4) -> [-1,1]",
      PruneShape::kNone, [](std::span<const UdfArg> a, const UdfEnv& env) {
        if (!env.cache) throw Error(ErrorCode::kConfig, "attributeSimAvg needs a row cache");
        return attribute_sim_avg(single(a[0], "attributeSimAvg"), single(a[1], "attributeSimAvg"),
                                 single(a[2], "attributeSimAvg"), single(a[3], "attributeSimAvg"),
                                 flag_of(a[4]), *env.cache, model_of(env));
      });
  add("analogyQuery", 5, 5, "analogyQuery(x, y, q, candidate, flag 1..3)", PruneShape::kNone,
      [](std::span<const UdfArg> a, const UdfEnv& env) {
        return analogy_query(single(a[0], "analogyQuery"), single(a[1], "analogyQuery"),
                             single(a[2], "analogyQuery"), a[3].tokens, flag_of(a[4]),
                             model_of(env), env.oov, env.epsilon);
      });
  add("analogyUDF", 4, 4, "analogyUDF(x, y, q, candidate) (3COSMUL)", PruneShape::kNone,
      [](std::span<const UdfArg> a, const UdfEnv& env) {
        return analogy_query(single(a[0], "analogyUDF"), single(a[1], "analogyUDF"),
                             single(a[2], "analogyUDF"), a[3].tokens, 3, model_of(env), env.oov,
                             env.epsilon);
      });
  auto seq = [](std::span<const UdfArg> a, const UdfEnv& env) {
    return analogy_sequence(single(a[0], "analogySequence"), single(a[1], "analogySequence"),
                            single(a[2], "analogySequence"), single(a[3], "analogySequence"),
                            single(a[4], "analogySequence"), a[5].tokens, flag_of(a[6]),
                            model_of(env), env.oov, env.epsilon);
  };
  add("analogyQueryOfImageSequenceUsingAttributeVector", 7, 7,
      "analogyQueryOfImageSequenceUsingAttributeVector(x1, y1, x2, y2, q, candidate, flag)",
      PruneShape::kNone, seq);
  add("analogySequence", 7, 7, "analogySequence(x1, y1, x2, y2, q, candidate, flag)",
      PruneShape::kNone, seq);
  add("proximityAvgForExtKB", 2, 2, "proximityAvgForExtKB(concept, text) -> [-1,1]",
      PruneShape::kNone, [](std::span<const UdfArg> a, const UdfEnv& env) {
        return proximity_avg_for_ext_kb(single(a[0], "proximityAvgForExtKB"), a[1].tokens,
                                        ext_model_of(env));
      });
  add("proximityAvgAdvForExtKB", 2, 2, "proximityAvgAdvForExtKB(concept, text) -> [-1,1]",
      PruneShape::kNone, [](std::span<const UdfArg> a, const UdfEnv& env) {
        return proximity_avg_adv_for_ext_kb(single(a[0], "proximityAvgAdvForExtKB"),
                                            a[1].tokens, ext_model_of(env));
      });
  add("semclusterUDF", 2, -1, "semclusterUDF(in1, ..., inN, candidate) -> [-1,1]",
      PruneShape::kKeyCentroid, [](std::span<const UdfArg> a, const UdfEnv& env) {
        std::vector<std::string> inputs;
        for (std::size_t i = 0; i + 1 < a.size(); ++i) {
          inputs.push_back(single(a[i], "semclusterUDF"));
        }
        return semantic_cluster_score(inputs, single(a.back(), "semclusterUDF"), model_of(env));
      });

  r.push_back({"contains", FunctionKind::kContains, 2, 2,
               "contains(column | T.* | T, token)", PruneShape::kNone, -1, {}});
  for (const char* agg : {"MAX", "MIN", "AVG"}) {
    r.push_back({agg, FunctionKind::kAggregate, 1, 1, std::string(agg) + "(expr)",
                 PruneShape::kNone, -1, {}});
  }
  return r;
}

}  // namespace

const std::vector<FunctionSpec>& function_registry() {
  static const std::vector<FunctionSpec> registry = make_registry();
  return registry;
}

const FunctionSpec* find_function(std::string_view name) {
  for (const FunctionSpec& f : function_registry()) {
    if (util::iequals(f.name, name)) return &f;
  }
  return nullptr;
}

}  // namespace cogdb::query
