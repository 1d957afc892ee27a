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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cogdb/error.h"
#include "cogdb/udf.h"
#include "support/oracles.h"
#include "support/test_models.h"

namespace cogdb {
namespace {

using oracle::V;
constexpr double kTol = 1e-6;

std::string w(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%04d", i);
  return buf;
}

class UdfTest : public ::testing::Test {
 protected:
  EmbeddingModel m = testing::random_model(40, 8, 21);
};

TEST_F(UdfTest, StringPresent) {
  EXPECT_EQ(string_present({"ice_cream", "berries"}, "berries"), 1);
  EXPECT_EQ(string_present({"ice_cream", "berries"}, "berry"), 0);
  EXPECT_EQ(string_present({}, "x"), 0);
}

TEST_F(UdfTest, ProximityAvgMatchesOracle) {
  const Tokens a = {w(1), w(2), w(3)};
  const Tokens b = {w(4), "not_there", w(5)};
  const double expected =
      oracle::cos(oracle::avg_tokens(m, a), oracle::avg_tokens(m, b));
  EXPECT_NEAR(proximity_avg(a, b, m, OovPolicy::kSkipWithDefault), expected, kTol);
  EXPECT_NEAR(proximity_avg(a, b, m, OovPolicy::kError), expected, kTol);
}

TEST_F(UdfTest, ProximityAvgOovPolicy) {
  const Tokens a = {w(1)};
  const Tokens unknown = {"nope", "nada"};
  const double fallback = oracle::cos(oracle::raw(m, w(1)), oracle::raw(m, "</s>"));
  EXPECT_NEAR(proximity_avg(a, unknown, m, OovPolicy::kSkipWithDefault), fallback, kTol);
  try {
    proximity_avg(a, unknown, m, OovPolicy::kError);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllTokensUnknown);
  }
}

TEST_F(UdfTest, TokenCosine) {
  EXPECT_NEAR(token_cosine(w(7), w(9), m, OovPolicy::kError),
              oracle::cos(oracle::raw(m, w(7)), oracle::raw(m, w(9))), kTol);
  EXPECT_NEAR(token_cosine(w(7), w(7), m, OovPolicy::kError), 1.0, kTol);
}

TEST_F(UdfTest, CombinedAvgSimMatchesOracle) {
  const V in = oracle::mean({oracle::raw(m, w(1)), oracle::raw(m, w(2)), oracle::raw(m, w(3))});
  EXPECT_NEAR(combined_avg_sim(w(10), w(1), w(2), w(3), m),
              oracle::cos(in, oracle::raw(m, w(10))), kTol);
  try {
    combined_avg_sim("ghost", w(1), w(2), w(3), m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownKey);
  }
}

// Cache rows r1..r4 whose classX columns hold the vectors of distinct tokens.
RowAttributeCache attribute_cache(const EmbeddingModel& m) {
  RowAttributeCache cache(m.dim());
  const std::vector<std::string> cols = {"classa", "classb", "classc", "classd", "color"};
  int next = 1;
  for (const std::string& key : {w(30), w(31), w(32), w(33)}) {
    for (const std::string& c : cols) {
      cache.put("images", key, c, oracle::raw(m, w(next++)));
    }
  }
  return cache;
}

TEST_F(UdfTest, AttributeSimAvgFlagsMatchOracleAndCounts) {
  const RowAttributeCache cache = attribute_cache(m);
  const std::vector<std::string> inputs = {w(30), w(31), w(32)};
  const std::string cand = w(33);
  auto col = [&](const std::string& key, const std::string& c) {
    return *cache.get("images", key, c);
  };
  auto mean_cols = [&](const std::vector<std::string>& keys, const std::vector<std::string>& cs) {
    std::vector<V> vs;
    for (const auto& k : keys) {
      for (const auto& c : cs) vs.push_back(col(k, c));
    }
    return oracle::mean(vs);
  };
  const std::vector<std::string> bc = {"classb", "classc"};
  const std::vector<std::string> bcd = {"classb", "classc", "classd"};
  struct Case {
    int flag;
    double expected;
    std::size_t in_count, cand_count;
  };
  const std::vector<Case> cases = {
      {1, oracle::cos(mean_cols(inputs, bc), mean_cols({cand}, bc)), 6, 2},
      {2, oracle::cos(mean_cols(inputs, bc), mean_cols({cand}, {"classd"})), 6, 1},
      {3, oracle::cos(mean_cols(inputs, bcd), mean_cols({cand}, bcd)), 9, 3},
      {4, oracle::cos(mean_cols(inputs, bcd), oracle::raw(m, cand)), 9, 1},
  };
  for (const Case& c : cases) {
    AttributeTrace trace;
    const double got =
        attribute_sim_avg(inputs[0], inputs[1], inputs[2], cand, c.flag, cache, m, "", &trace);
    EXPECT_NEAR(got, c.expected, kTol) << "flag " << c.flag;
    EXPECT_EQ(trace.input_vectors, c.in_count) << "flag " << c.flag;
    EXPECT_EQ(trace.candidate_vectors, c.cand_count) << "flag " << c.flag;
  }
}

TEST_F(UdfTest, AttributeSimAvgErrors) {
  const RowAttributeCache cache = attribute_cache(m);
  try {
    attribute_sim_avg(w(30), w(31), w(32), w(33), 5, cache, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidFlag);
  }
  try {
    attribute_sim_avg(w(30), w(31), "missing_row", w(33), 1, cache, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownKey);
  }
}

TEST_F(UdfTest, AnalogyScoreForms) {
  const V x = oracle::raw(m, w(1)), y = oracle::raw(m, w(2)), q = oracle::raw(m, w(3)),
          c = oracle::raw(m, w(4));
  EXPECT_NEAR(analogy_score(x, y, q, c, AnalogyMethod::kCosAdd), oracle::cos_add(x, y, q, c),
              kTol);
  EXPECT_NEAR(analogy_score(x, y, q, c, AnalogyMethod::kPairDirection),
              oracle::pair_direction(x, y, q, c), kTol);
  EXPECT_NEAR(analogy_score(x, y, q, c, AnalogyMethod::kCosMul),
              oracle::cos_mul(x, y, q, c, 0.001), kTol);
  EXPECT_NEAR(analogy_score(x, y, q, c, AnalogyMethod::kCosMul, 0.5),
              oracle::cos_mul(x, y, q, c, 0.5), kTol);
}

TEST_F(UdfTest, CosMulIsFiniteAndNonNegative) {
  for (int i = 1; i < 30; ++i) {
    const V x = oracle::raw(m, w(i)), y = oracle::raw(m, w(i + 1)),
            q = oracle::raw(m, w(i + 2)), c = oracle::raw(m, w(i + 3));
    const double s = analogy_score(x, y, q, c, AnalogyMethod::kCosMul);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_GE(s, 0.0);
  }
  // Opposite vectors: s(w, x) = 0, bounded only by epsilon.
  const V x = {1, 0}, neg = {-1, 0};
  EXPECT_TRUE(std::isfinite(analogy_score(x, x, x, neg, AnalogyMethod::kCosMul)));
}

TEST_F(UdfTest, PairDirectionDegenerate) {
  const V x = oracle::raw(m, w(1));
  try {
    analogy_score(x, x, oracle::raw(m, w(2)), oracle::raw(m, w(3)),
                  AnalogyMethod::kPairDirection);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateDirection);
  }
}

TEST_F(UdfTest, FlagMapping) {
  EXPECT_EQ(analogy_method_from_flag(1), AnalogyMethod::kCosAdd);
  EXPECT_EQ(analogy_method_from_flag(3), AnalogyMethod::kCosMul);
  EXPECT_THROW(analogy_method_from_flag(0), Error);
  EXPECT_THROW(analogy_method_from_flag(4), Error);
}

TEST_F(UdfTest, AnalogyQueryMatchesOracle) {
  const Tokens d = {w(5), w(6)};
  for (int flag = 1; flag <= 3; ++flag) {
    const V x = oracle::raw(m, w(1)), y = oracle::raw(m, w(2)), q = oracle::raw(m, w(3));
    const V wv = oracle::avg_tokens(m, d);
    const double expected = flag == 1   ? oracle::cos_add(x, y, q, wv)
                            : flag == 2 ? oracle::pair_direction(x, y, q, wv)
                                        : oracle::cos_mul(x, y, q, wv, 0.001);
    EXPECT_NEAR(analogy_query(w(1), w(2), w(3), d, flag, m, OovPolicy::kError), expected, kTol);
  }
  EXPECT_THROW(analogy_query("ghost", w(2), w(3), d, 1, m, OovPolicy::kError), Error);
}

TEST_F(UdfTest, AnalogySequenceMatchesOracle) {
  const Tokens f = {w(8)};
  const V x = oracle::mean({oracle::raw(m, w(1)), oracle::raw(m, w(3))});
  const V y = oracle::mean({oracle::raw(m, w(2)), oracle::raw(m, w(4))});
  const V q = oracle::raw(m, w(5));
  const V wv = oracle::raw(m, w(8));
  EXPECT_NEAR(analogy_sequence(w(1), w(2), w(3), w(4), w(5), f, 3, m, OovPolicy::kError),
              oracle::cos_mul(x, y, q, wv, 0.001), kTol);
  EXPECT_NEAR(analogy_sequence(w(1), w(2), w(3), w(4), w(5), f, 1, m, OovPolicy::kError),
              oracle::cos_add(x, y, q, wv), kTol);
}

TEST_F(UdfTest, SemanticClusterScore) {
  const Tokens in = {w(1), w(2), w(3)};
  EXPECT_NEAR(semantic_cluster_score(in, w(20), m),
              oracle::cos(oracle::avg_tokens(m, in), oracle::raw(m, w(20))), kTol);
  EXPECT_THROW(semantic_cluster_score({}, w(20), m), Error);
}

TEST(SemanticCluster, CarnivoresRankAboveHerbivores) {
  // Axis 0 = carnivore trait, axis 1 = herbivore trait, small distinct offsets.
  const EmbeddingModel m = testing::make_model(
      {{"</s>", {0.1f, 0.1f, 1.0f}},
       {"lion", {1.0f, 0.1f, 0.2f}},
       {"vulture", {0.9f, 0.0f, -0.3f}},
       {"shark", {1.0f, -0.1f, 0.1f}},
       {"hyena", {0.95f, 0.05f, 0.0f}},
       {"wolf", {0.9f, 0.1f, 0.15f}},
       {"cow", {0.1f, 1.0f, 0.1f}},
       {"deer", {0.0f, 0.9f, -0.2f}}},
      true);
  const Tokens in = {"lion", "vulture", "shark"};
  for (const std::string carn : {"hyena", "wolf"}) {
    for (const std::string herb : {"cow", "deer"}) {
      EXPECT_GT(semantic_cluster_score(in, carn, m), semantic_cluster_score(in, herb, m));
    }
  }
}

TEST_F(UdfTest, OddManOutMatchesBruteForce) {
  for (int start = 1; start < 30; start += 4) {
    const Tokens items = {w(start), w(start + 1), w(start + 2), w(start + 3), w(start + 4)};
    std::string best;
    double best_mean = 2.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (i != j) sum += oracle::cos(oracle::raw(m, items[i]), oracle::raw(m, items[j]));
      }
      if (sum / 4.0 < best_mean) {
        best_mean = sum / 4.0;
        best = items[i];
      }
    }
    EXPECT_EQ(odd_man_out(items, m), best);
  }
  EXPECT_THROW(odd_man_out({w(1), w(2)}, m), Error);
}

TEST_F(UdfTest, ClusteredAnalogySinglePairIsTopAnalogy) {
  const std::string s = w(1), t = w(2);
  const auto result = clustered_analogies({{s, t}}, 1, 1, m);
  ASSERT_EQ(result.size(), 1u);
  const auto nearest = oracle::top_k(m, oracle::raw(m, s), 1, {s});
  EXPECT_EQ(result[0].source, nearest[0].first);
  const std::string expected = oracle::best_analogy(
      m, oracle::raw(m, s), oracle::raw(m, t), oracle::raw(m, result[0].source), 3,
      {s, t, result[0].source});
  ASSERT_EQ(result[0].targets.size(), 1u);
  EXPECT_EQ(result[0].targets[0], expected);
}

TEST_F(UdfTest, ClusteredAnalogyRestrictedCandidates) {
  const std::vector<std::string> pool = {w(10), w(11), w(12), w(13)};
  const auto result = clustered_analogies({{w(1), w(2)}, {w(3), w(4)}}, 2, 3, m, pool);
  ASSERT_EQ(result.size(), 2u);
  for (const auto& r : result) {
    EXPECT_NE(std::find(pool.begin(), pool.end(), r.source), pool.end());
    EXPECT_EQ(r.targets.size(), 3u);
    for (const auto& tgt : r.targets) EXPECT_NE(tgt, r.source);
  }
}

EmbeddingModel ext_model() {
  return testing::make_model({{"</s>", {0.0f, 0.0f, 1.0f}},
                              {"CONCEPT_Listeria", {1.0f, 0.2f, 0.0f}},
                              {"CONCEPT_Berries", {0.8f, 0.4f, 0.1f}},
                              {"berries", {0.2f, 0.9f, 0.3f}},
                              {"apples", {0.3f, 0.3f, 0.3f}}},
                             true);
}

TEST(ExtKb, ConceptResolutionAndFallback) {
  const EmbeddingModel m = ext_model();
  const V c = oracle::raw(m, "CONCEPT_Listeria");
  const V cb = oracle::raw(m, "CONCEPT_Berries");
  const V sentinel = oracle::raw(m, "</s>");
  const double expected = oracle::cos(c, oracle::mean({cb, sentinel}));
  EXPECT_NEAR(proximity_avg_for_ext_kb("CONCEPT_Listeria", {"berries", "apples"}, m), expected,
              kTol);
  EXPECT_NEAR(proximity_avg_for_ext_kb("listeria", {"berries", "apples"}, m), expected, kTol);
  EXPECT_NEAR(proximity_avg_for_ext_kb("listeria", {}, m), oracle::cos(c, sentinel), kTol);
  try {
    proximity_avg_for_ext_kb("salmonella", {"berries"}, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownConcept);
  }
}

TEST(ExtKb, AdvAveragesConceptAndPlain) {
  const EmbeddingModel m = ext_model();
  const V c = oracle::raw(m, "CONCEPT_Listeria");
  const V both = oracle::mean({oracle::raw(m, "CONCEPT_Berries"), oracle::raw(m, "berries")});
  const V sentinel = oracle::raw(m, "</s>");
  EXPECT_NEAR(proximity_avg_adv_for_ext_kb("listeria", {"berries", "apples"}, m),
              oracle::cos(c, oracle::mean({both, sentinel})), kTol);
}

TEST(ExtKb, ConceptToken) {
  EXPECT_EQ(concept_token("listeria"), "CONCEPT_Listeria");
  EXPECT_EQ(concept_token("Berries"), "CONCEPT_Berries");
  EXPECT_EQ(concept_token("9lives"), "CONCEPT_9lives");
}

TEST(Cosine, ZeroVectorAndMismatch) {
  const V a = {1.0, 0.0}, z = {0.0, 0.0}, three = {1.0, 0.0, 0.0};
  try {
    cosine(a, z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVector);
  }
  EXPECT_THROW(cosine(a, three), Error);
}

}  // namespace
}  // namespace cogdb
