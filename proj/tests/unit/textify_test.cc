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

#include <algorithm>
#include <set>

#include "cogdb/csv.h"
#include "cogdb/error.h"
#include "cogdb/image_tags.h"
#include "cogdb/textify.h"
#include "cogdb/util/checksum.h"
#include "support/oracles.h"
#include "support/test_models.h"

namespace cogdb {
namespace {

using Toks = std::vector<std::string>;

ColumnSchema numeric_col(const std::string& name, NumericMode mode) {
  ColumnSchema c;
  c.name = name;
  c.kind = ColumnKind::kNumeric;
  c.numeric_mode = std::move(mode);
  return c;
}

TEST(ColumnToken, LowercasesAndJoins) {
  EXPECT_EQ(column_token("Cocoa Contents"), "cocoa_contents");
  EXPECT_EQ(column_token("classA"), "classa");
  EXPECT_EQ(empty_marker("classB"), "classb_empty");
}

TEST(NormalizeText, PhraseWhenCapitalized) {
  EXPECT_EQ(normalize_text_token("Mastiff Dog", "c"), Toks{"mastiff_dog"});
  EXPECT_EQ(normalize_text_token("Fresh Produce", "c"), Toks{"fresh_produce"});
}

TEST(NormalizeText, LowercaseBlankListSplits) {
  EXPECT_EQ(normalize_text_token("lion predator", "c"), (Toks{"lion", "predator"}));
}

TEST(NormalizeText, CommaGroupsAreMultiPartTokens) {
  EXPECT_EQ(normalize_text_token("Ice Cream, Frozen Pizza", "items"),
            (Toks{"ice_cream", "frozen_pizza"}));
  EXPECT_EQ(normalize_text_token("bananas, apples;berries", "items"),
            (Toks{"bananas", "apples", "berries"}));
}

TEST(NormalizeText, StopWordsOnlyWhenAlone) {
  EXPECT_EQ(normalize_text_token("the lion", "c"), Toks{"lion"});
  EXPECT_EQ(normalize_text_token("Bird of Prey", "c"), Toks{"bird_of_prey"});
  EXPECT_EQ(normalize_text_token("the", "Items"), Toks{"items_empty"});
}

TEST(NormalizeText, EmptyAndSpecials) {
  EXPECT_EQ(normalize_text_token("", "Items"), Toks{"items_empty"});
  EXPECT_EQ(normalize_text_token("  !!  ", "Items"), Toks{"items_empty"});
  EXPECT_EQ(normalize_text_token("caf\xc3\xa9 au-lait", "c"), (Toks{"caf", "aulait"}));
  EXPECT_EQ(normalize_text_token("v1.5 beta", "c"), (Toks{"v1.5", "beta"}));
}

TEST(NormalizeKey, SingleToken) {
  EXPECT_EQ(normalize_key("custA"), "custa");
  EXPECT_EQ(normalize_key("n01321230_10812"), "n01321230_10812");
  EXPECT_THROW(normalize_key("!!"), Error);
}

TEST(NumericEncoding, LiteralAndMissing) {
  const ColumnSchema col = numeric_col("columnA", NumericMode::literal());
  const NumericEncoder enc = fit_numeric_encoder({0.75}, col);
  EXPECT_EQ(encode_numeric(0.75, col, enc), "columna_0_75");
  EXPECT_EQ(encode_numeric(std::nullopt, col, enc), "columna_empty");
  EXPECT_EQ(encode_numeric(-2.5, col, enc), "columna_neg2_5");
  EXPECT_EQ(encode_numeric(200.5, col, enc), "columna_200_5");
  EXPECT_EQ(encode_numeric(12.0, col, enc), "columna_12");
}

TEST(NumericEncoding, Rounded) {
  const ColumnSchema col = numeric_col("Amount", NumericMode::rounded(1));
  const NumericEncoder enc = fit_numeric_encoder({3.14159}, col);
  EXPECT_EQ(encode_numeric(3.14159, col, enc), "amount_3_1");
  EXPECT_EQ(encode_numeric(2.96, col, enc), "amount_3_0");
}

TEST(NumericEncoding, RangeRule) {
  ColumnSchema col = numeric_col("Salary", NumericMode::range_rule({{50.0, "low"}, {100.0, "mid"}}));
  const NumericEncoder enc = fit_numeric_encoder({10.0}, col);
  EXPECT_EQ(encode_numeric(10.0, col, enc), "low");
  EXPECT_EQ(encode_numeric(50.0, col, enc), "mid");
  EXPECT_EQ(encode_numeric(100.0, col, enc), "salary_out_of_range");
  col.prepend_name = true;
  EXPECT_EQ(encode_numeric(99.0, col, enc), "salary_mid");
}

TEST(NumericEncoding, KMeansMatchesExhaustivePartition) {
  const std::vector<double> values = {1.0, 2.0, 3.0, 100.0, 101.0, 102.0};
  const std::vector<double> expected = oracle::best_two_means(values);
  const ColumnSchema col = numeric_col("Amount", NumericMode::kmeans(2));
  std::vector<std::optional<double>> opt(values.begin(), values.end());
  opt.push_back(std::nullopt);
  const NumericEncoder enc = fit_numeric_encoder(opt, col);
  ASSERT_EQ(enc.centroids.size(), 2u);
  EXPECT_NEAR(enc.centroids[0], expected[0], 1e-9);
  EXPECT_NEAR(enc.centroids[1], expected[1], 1e-9);
  EXPECT_EQ(encode_numeric(2.0, col, enc), "cluster_0");
  EXPECT_EQ(encode_numeric(102.0, col, enc), "cluster_1");
}

TEST(NumericEncoding, KMeansIgnoresInputOrder) {
  std::vector<std::optional<double>> values;
  for (int i = 0; i < 40; ++i) values.push_back(static_cast<double>((i * 37) % 53) * 1.5);
  const ColumnSchema col = numeric_col("Amount", NumericMode::kmeans(4));
  const NumericEncoder a = fit_numeric_encoder(values, col);
  std::reverse(values.begin(), values.end());
  std::rotate(values.begin(), values.begin() + 11, values.end());
  const NumericEncoder b = fit_numeric_encoder(values, col);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_TRUE(std::is_sorted(a.centroids.begin(), a.centroids.end()));
}

TEST(NumericEncoding, KMeansNeedsDistinctValues) {
  const ColumnSchema col = numeric_col("Amount", NumericMode::kmeans(3));
  try {
    fit_numeric_encoder({1.0, 1.0, 2.0}, col);
    FAIL() << "expected InsufficientData";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

// The four parsing examples given for variable-length hierarchies.
TEST(TypeHierarchy, PublishedExamples) {
  struct Case {
    std::vector<std::string> in;
    Toks a, b, c, d;
  };
  const std::vector<Case> cases = {
      {{"/domestic animal/mastiff dog"},
       {"domestic_animal"}, {"classb_empty"}, {"classc_empty"}, {"mastiff_dog"}},
      {{"/animal/mammal/carnivore/giant panda"},
       {"animal"}, {"mammal"}, {"carnivore"}, {"giant_panda"}},
      {{"/animal/mammal/racehorse/thoroughbred horse", "/stable gear/bridle"},
       {"animal", "stable_gear"}, {"mammal"}, {"racehorse"}, {"thoroughbred_horse", "bridle"}},
      {{"/animal/mammal/carnivore/feline/big cat/lion", "/animal/predator"},
       {"animal"}, {"mammal"}, {"carnivore", "feline", "big_cat"}, {"lion", "predator"}},
  };
  for (const Case& c : cases) {
    const HierarchyColumns h = parse_type_hierarchy(c.in);
    EXPECT_EQ(h.class_a, c.a) << c.in[0];
    EXPECT_EQ(h.class_b, c.b) << c.in[0];
    EXPECT_EQ(h.class_c, c.c) << c.in[0];
    EXPECT_EQ(h.class_d, c.d) << c.in[0];
  }
}

TEST(TypeHierarchy, TooShortIsMalformed) {
  try {
    parse_type_hierarchy({"/animal"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedHierarchy);
  }
}

TEST(TypeHierarchy, DuplicateTokensKeptOnce) {
  const HierarchyColumns h = parse_type_hierarchy(
      {"/animal/mammal/carnivore/feline/big cat/leopard",
       "/animal/mammal/carnivore/feline/big cat/jaguar"});
  EXPECT_EQ(h.class_c, (Toks{"carnivore", "feline", "big_cat"}));
  EXPECT_EQ(h.class_d, (Toks{"leopard", "jaguar"}));
}

// Rows of the published image table, in lowercase canonical form (the
// printed table mixes "classB_empty" casing; tokens here are lowercase).
const std::vector<std::array<std::string, 6>>& published_rows() {
  static const std::vector<std::array<std::string, 6>> rows = {
      {"n01321230_10812", "domestic_animal", "classb_empty", "classc_empty", "mastiff_dog",
       "coal_black"},
      {"n01323599_24918", "animal stable_gear", "mammal", "racehorse",
       "thoroughbred_horse bridle", "chestnut"},
      {"n01323781_28865", "animal", "mammal", "carnivore", "giant_panda",
       "light_brown pale_yellow"},
      {"n00015388_40455", "animal", "mammal", "carnivore feline big_cat", "lion predator",
       "light_brown"},
      {"n02152881_5850", "animal", "mammal", "carnivore feline big_cat", "cheetah", "azure"},
      {"n01324431_10483", "animal", "mammal", "carnivore feline big_cat", "leopard jaguar",
       "beige"},
      {"n01314781_804", "animal", "reptile", "classc_empty", "scincid_lizard ribbon_snake",
       "olive_green"},
      {"n02512830_2690", "animal", "aquatic_vertebrate", "spiny_finned_fish", "permit",
       "azure alabaster"},
      {"n01316422_255", "animal", "bird_of_prey", "new_world_vulture", "black_vulture",
       "coal_black"},
      {"n01323781_5780", "animal", "reptile", "turtle", "giant_tortoise", "sea_green green"},
  };
  return rows;
}

TEST(ImageResponse, ReproducesPublishedRows) {
  for (const auto& row : published_rows()) {
    const std::string json =
        util::read_file(testing::fixture_path("images/" + row[0] + ".json"));
    const ImageTagRecord rec = textify_image_response(row[0], json);
    EXPECT_EQ(rec.cells(), row) << row[0];
  }
}

TEST(ImageResponse, BareClassesObject) {
  const ImageTagRecord rec = textify_image_response(
      "x", R"({"classes":[{"class":"cat","type_hierarchy":"/animal/cat"},{"class":"gray color"}]})");
  EXPECT_EQ(rec.class_a, Toks{"animal"});
  EXPECT_EQ(rec.class_d, Toks{"cat"});
  EXPECT_EQ(rec.color, Toks{"gray"});
  EXPECT_EQ(rec.class_b, Toks{"classb_empty"});
}

TEST(ImageResponse, MissingClassesIsSchemaError) {
  try {
    textify_image_response("x", R"({"images":[]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
}

TEST(ImageTable, FixtureTransportBuildsTenRows) {
  FixtureTransport t(testing::fixture_path("images"));
  const RelationalTable table = build_image_table(t, "images");
  ASSERT_EQ(table.num_rows(), 10u);
  ASSERT_EQ(table.num_columns(), 6u);
  const auto corpus = textify_table(table, fit_table_encoders(table));
  ASSERT_EQ(corpus.size(), 10u);
  for (const TokenSentence& s : corpus) {
    std::set<std::string> groups(s.columns.begin(), s.columns.end());
    EXPECT_EQ(groups.size(), 6u);
    ASSERT_TRUE(s.row_key.has_value());
    EXPECT_EQ(s.tokens.front(), *s.row_key);
  }
}

RelationalTable sales() {
  return load_csv_table(testing::fixture_path("sales.csv"),
                        testing::fixture_path("sales.schema.json"));
}

TEST(TextifyTable, OneSentencePerRowInColumnOrder) {
  const RelationalTable t = sales();
  const auto corpus = textify_table(t, fit_table_encoders(t));
  ASSERT_EQ(corpus.size(), t.num_rows());
  const TokenSentence& a = corpus[0];
  EXPECT_EQ(a.row_key, "custa");
  EXPECT_EQ(a.tokens,
            (Toks{"custa", "20161112", "main_st", "stamford", "merchant_a", "fresh_produce",
                  "bananas", "apples", "berries", "amount_200_5"}));
  EXPECT_EQ(a.columns.front(), "sales.custid");
  EXPECT_EQ(a.columns.back(), "sales.amount");
  EXPECT_EQ(a.tokens.size(), a.columns.size());
}

TEST(TextifyTable, ForeignKeySplicesReferencedRow) {
  const RelationalTable dept = load_csv_table(testing::fixture_path("dept.csv"),
                                              testing::fixture_path("dept.schema.json"));
  const RelationalTable emp = load_csv_table(testing::fixture_path("emp.csv"),
                                             testing::fixture_path("emp.schema.json"));
  const TableEncoders dept_enc = fit_table_encoders(dept);
  const auto corpus =
      textify_table(emp, fit_table_encoders(emp), {{"DeptID", &dept, &dept_enc}});
  const Toks& first = corpus[0].tokens;
  const Toks tail(first.end() - 4, first.end());
  EXPECT_EQ(tail, (Toks{"d1", "oncology", "stamford", "connecticut"}));
  // The referenced key itself is not repeated from the target row.
  EXPECT_EQ(std::count(first.begin(), first.end(), "d1"), 1);
}

TEST(TextifyTable, DanglingForeignKey) {
  RelationalTable dept("dept", {{"DeptID", ColumnKind::kPrimaryKey, {}, 1.0, false}});
  dept.add_row({Cell{std::string("d9")}});
  const RelationalTable emp = load_csv_table(testing::fixture_path("emp.csv"),
                                             testing::fixture_path("emp.schema.json"));
  const TableEncoders enc = fit_table_encoders(dept);
  try {
    textify_table(emp, fit_table_encoders(emp), {{"DeptID", &dept, &enc}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingForeignKey);
  }
}

TEST(ExternalKb, RepetitionsMultiplySentences) {
  const RelationalTable t = sales();
  auto corpus = textify_table(t, fit_table_encoders(t));
  const std::vector<std::string> kb = {"Listeria recall covers berries", "", "frozen peas"};
  corpus = append_external_kb(std::move(corpus), kb, 2);
  EXPECT_EQ(corpus.size(), t.num_rows() + 2 * 2);
  EXPECT_FALSE(corpus.back().row_key.has_value());
  EXPECT_EQ(corpus[t.num_rows()].tokens, (Toks{"listeria", "recall", "covers", "berries"}));
  EXPECT_THROW(append_external_kb({}, kb, 0), Error);
}

TEST(Corpus, TextAndLayoutRoundTrip) {
  const RelationalTable t = sales();
  const auto corpus = textify_table(t, fit_table_encoders(t));
  const auto back = corpus_from_text(corpus_to_text(corpus), corpus_layout_to_text(corpus));
  ASSERT_EQ(back.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(back[i].tokens, corpus[i].tokens);
    EXPECT_EQ(back[i].columns, corpus[i].columns);
    EXPECT_EQ(back[i].row_key, corpus[i].row_key);
    EXPECT_EQ(back[i].table, corpus[i].table);
  }
}

TEST(Corpus, LayoutMismatchIsFormatError) {
  EXPECT_THROW(corpus_from_text("a b\nc\n", R"({"columns":["x"]})"), FormatError);
  EXPECT_THROW(corpus_from_text("a b\n", R"({"columns":["x","y"]})" "\n" R"({"columns":[]})"),
               FormatError);
}

TEST(Csv, QuotedFieldsAndLineEndings) {
  const auto recs = parse_csv("a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",2\n");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[1][0], "x, y");
  EXPECT_EQ(recs[1][1], "say \"hi\"");
  EXPECT_EQ(recs[2][0], "multi\nline");
  EXPECT_EQ(parse_csv(write_csv(recs)), recs);
}

TEST(Csv, InferSchema) {
  const auto recs = parse_csv("id,name,score\nk1,Ann,1.5\nk2,Bob,\n");
  const auto schema = infer_schema(recs);
  ASSERT_EQ(schema.size(), 3u);
  EXPECT_EQ(schema[0].kind, ColumnKind::kPrimaryKey);
  EXPECT_EQ(schema[1].kind, ColumnKind::kText);
  EXPECT_EQ(schema[2].kind, ColumnKind::kNumeric);
  const RelationalTable t = table_from_records("t", recs, schema);
  EXPECT_TRUE(is_missing(t.rows()[1][2]));
}

TEST(Table, DuplicateKeyRejected) {
  const auto recs = parse_csv("id,v\nk,1\nk,2\n");
  try {
    table_from_records("t", recs, infer_schema(recs));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
}

TEST(Table, MissingCellTokens) {
  const auto recs = parse_csv("id,name,score\nk1,,\n");
  std::vector<ColumnSchema> schema = infer_schema(recs);
  schema[2].kind = ColumnKind::kNumeric;
  const RelationalTable t = table_from_records("t", recs, schema);
  const TableEncoders enc = fit_table_encoders(t);
  EXPECT_EQ(cell_tokens(t, enc, 0, 1), Toks{"name_empty"});
  EXPECT_EQ(cell_tokens(t, enc, 0, 2), Toks{"score_empty"});
}

TEST(StopWordList, FromFile) {
  const auto dir = testing::scratch_dir("stop");
  util::write_file(dir / "stop.txt", "# comment\nFoo\n\nbar\n");
  const StopWords sw = StopWords::from_file(dir / "stop.txt");
  EXPECT_EQ(sw.size(), 2u);
  EXPECT_EQ(normalize_text_token("foo the baz", "c", sw), (Toks{"the", "baz"}));
}

}  // namespace
}  // namespace cogdb
