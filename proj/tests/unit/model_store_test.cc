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
#include <filesystem>

#include "cogdb/ann.h"
#include "cogdb/csv.h"
#include "cogdb/error.h"
#include "cogdb/model_store.h"
#include "cogdb/row_cache.h"
#include "cogdb/util/checksum.h"
#include "cogdb/word2vec_io.h"
#include "support/test_models.h"

namespace cogdb {
namespace {

namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kConfig;
}

void expect_same_model(const EmbeddingModel& a, const EmbeddingModel& b, double tol) {
  ASSERT_EQ(a.vocab(), b.vocab());
  ASSERT_EQ(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    if (tol == 0.0) {
      ASSERT_EQ(a.data()[i], b.data()[i]) << i;
    } else {
      ASSERT_NEAR(a.data()[i], b.data()[i], tol) << i;
    }
  }
}

EmbeddingModel small_trained() {
  TrainingConfig cfg;
  cfg.dimension = 8;
  cfg.epochs = 3;
  cfg.threads = 1;
  cfg.seed = 11;
  return train(testing::two_group_corpus(20, 3), cfg);
}

RelationalTable sales() {
  return load_csv_table(testing::fixture_path("sales.csv"),
                        testing::fixture_path("sales.schema.json"));
}

TEST(Word2Vec, TextRoundTripWithinTolerance) {
  const EmbeddingModel m = testing::random_model(40, 7, 3);
  expect_same_model(parse_model(serialize_text(m), ModelFormat::kWord2VecText), m, 1e-6);
}

TEST(Word2Vec, TextIsActuallyExact) {
  const EmbeddingModel m = testing::random_model(40, 7, 3);
  expect_same_model(parse_model(serialize_text(m), ModelFormat::kWord2VecText), m, 0.0);
}

TEST(Word2Vec, BinaryRoundTripExact) {
  const EmbeddingModel m = small_trained();
  const std::string bytes = serialize_binary(m);
  expect_same_model(parse_model(bytes, ModelFormat::kWord2VecBinary), m, 0.0);
  EXPECT_EQ(serialize_binary(parse_model(bytes, ModelFormat::kWord2VecBinary)), bytes);
}

TEST(Word2Vec, HeaderAndLayout) {
  const EmbeddingModel m = testing::make_model({{"</s>", {1, 0}}, {"a", {0, 1}}});
  const std::string text = serialize_text(m);
  EXPECT_EQ(text.substr(0, 4), "2 2\n");
  const std::string bin = serialize_binary(m);
  EXPECT_EQ(bin.size(), 4u + 2 * (2 * 4 + 1) + 5 + 2);
}

TEST(Word2Vec, TinyHandWrittenFile) {
  const std::string text =
      "3 4\n"
      "</s> 1 0 0 0\n"
      "cat 0 3 0 4\n"
      "dog 0 0 1 0\n";
  const EmbeddingModel m = parse_model(text, ModelFormat::kWord2VecText);
  ASSERT_EQ(m.size(), 3u);
  const auto cat = *m.lookup("cat");
  EXPECT_NEAR(cat[1], 0.6f, 1e-7);
  EXPECT_NEAR(cat[3], 0.8f, 1e-7);
}

TEST(Word2Vec, MalformedInputsCarryOffsets) {
  try {
    parse_model("3 4\n</s> 1 0 0 0\ncat 0 1 0 0\n", ModelFormat::kWord2VecText);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
  EXPECT_THROW(parse_model("2 4\n</s> 1 0 0\ncat 0 1 0 0\n", ModelFormat::kWord2VecText),
               FormatError);
  EXPECT_THROW(parse_model("x y\n", ModelFormat::kWord2VecText), FormatError);
  EXPECT_THROW(parse_model("", ModelFormat::kWord2VecBinary), FormatError);
  const EmbeddingModel m = testing::random_model(5, 4, 1);
  const std::string bin = serialize_binary(m);
  EXPECT_THROW(parse_model(std::string_view(bin).substr(0, bin.size() - 6),
                           ModelFormat::kWord2VecBinary),
               FormatError);
}

TEST(Word2Vec, FormatNames) {
  for (ModelFormat f : {ModelFormat::kWord2VecText, ModelFormat::kWord2VecBinary}) {
    EXPECT_EQ(parse_model_format(model_format_name(f)), f);
  }
  EXPECT_FALSE(parse_model_format("glove"));
}

TEST(Word2Vec, FileRoundTrip) {
  const fs::path dir = testing::scratch_dir("w2v");
  const EmbeddingModel m = testing::random_model(12, 5, 8);
  save_model(m, dir / "m.bin", ModelFormat::kWord2VecBinary);
  expect_same_model(load_model(dir / "m.bin", ModelFormat::kWord2VecBinary), m, 0.0);
  EXPECT_EQ(code_of([&] { load_model(dir / "missing.bin", ModelFormat::kWord2VecBinary); }),
            ErrorCode::kIo);
  fs::remove_all(dir);
}

// ---- row cache ---------------------------------------------------------------

TEST(RowCache, RoundTripWithinTolerance) {
  const RelationalTable t = sales();
  const TableEncoders enc = fit_table_encoders(t);
  const EmbeddingModel m = testing::random_model(5, 6, 2);
  // Every token unknown: the default policy fills in the sentinel vector.
  const RowAttributeCache c = build_row_attribute_cache(t, enc, m, OovPolicy::kSkipWithDefault);
  ASSERT_EQ(c.num_rows(), 8u);
  const RowAttributeCache back = parse_row_cache(serialize_row_cache(c));
  ASSERT_EQ(back.rows().size(), c.rows().size());
  for (const auto& [key, cols] : c.rows()) {
    const auto& other = back.rows().at(key);
    ASSERT_EQ(other.size(), cols.size());
    for (const auto& [name, v] : cols) {
      for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(other.at(name)[i], v[i], 1e-7);
    }
  }
  EXPECT_EQ(back, c);
}

TEST(RowCache, EmptyRoundTrips) {
  RowAttributeCache empty(4);
  empty.set_config_hash("deadbeef");
  EXPECT_EQ(parse_row_cache(serialize_row_cache(empty)), empty);
  EXPECT_EQ(parse_row_cache(serialize_row_cache(RowAttributeCache{})), RowAttributeCache{});
}

TEST(RowCache, FileHelpersAndCorruption) {
  const fs::path dir = testing::scratch_dir("rc");
  RowAttributeCache c(2);
  c.put("sales", "custa", "amount", {0.25, -0.5});
  save_row_cache(c, dir / "c.bin");
  EXPECT_EQ(load_row_cache(dir / "c.bin"), c);
  const std::string bytes = serialize_row_cache(c);
  EXPECT_THROW(parse_row_cache(std::string_view(bytes).substr(0, bytes.size() - 1)), FormatError);
  EXPECT_THROW(parse_row_cache("CGDBXXX"), FormatError);
  fs::remove_all(dir);
}

TEST(RowCache, ErrorPolicyOnAllUnknown) {
  const RelationalTable t = sales();
  const EmbeddingModel m = testing::random_model(5, 6, 2);
  EXPECT_EQ(code_of([&] { build_row_attribute_cache(t, fit_table_encoders(t), m, OovPolicy::kError); }),
            ErrorCode::kAllTokensUnknown);
}

// ---- store -----------------------------------------------------------------

class Store : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::scratch_dir("store");
    model_ = small_trained();
    TrainingConfig cfg;
    cfg.seed = 11;
    hash_ = config_hash(cfg);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  EmbeddingModel model_;
  std::string hash_;
};

TEST_F(Store, OpenReproducesModel) {
  for (ModelFormat f : {ModelFormat::kWord2VecBinary, ModelFormat::kWord2VecText}) {
    save_store(dir_, model_, f, 11, hash_);
    const ModelStore s = ModelStore::open(dir_);
    expect_same_model(s.model(), model_, 0.0);
    for (std::size_t i = 0; i < model_.size(); ++i) {
      const auto v = s.lookup(model_.token(i));
      ASSERT_TRUE(v);
      EXPECT_TRUE(std::equal(v->begin(), v->end(), model_.vector(i).begin()));
    }
    EXPECT_FALSE(s.lookup("never_seen_token"));
    EXPECT_EQ(s.manifest().seed, 11u);
    EXPECT_EQ(s.manifest().config_hash, hash_);
    EXPECT_TRUE(s.warnings().empty());
  }
}

TEST_F(Store, TamperedModelDetected) {
  save_store(dir_, model_, ModelFormat::kWord2VecBinary, 1, hash_);
  std::string bytes = util::read_file(dir_ / "model.bin");
  bytes[bytes.size() / 2] ^= 0x01;
  util::write_file(dir_ / "model.bin", bytes);
  EXPECT_EQ(code_of([&] { ModelStore::open(dir_); }), ErrorCode::kChecksumMismatch);
}

TEST_F(Store, TamperedIndexDetected) {
  save_store(dir_, model_, ModelFormat::kWord2VecBinary, 1, hash_);
  add_index_to_store(dir_, build_lsh(model_, 8, 3));
  std::string bytes = util::read_file(dir_ / "index.lsh.bin");
  bytes.back() ^= 0x10;
  util::write_file(dir_ / "index.lsh.bin", bytes);
  EXPECT_EQ(code_of([&] { ModelStore::open(dir_); }), ErrorCode::kChecksumMismatch);
}

TEST_F(Store, ManifestVersionAndShape) {
  save_store(dir_, model_, ModelFormat::kWord2VecBinary, 1, hash_);
  std::string manifest = util::read_file(dir_ / kManifestName);
  const auto pos = manifest.find("\"version\": 1");
  ASSERT_NE(pos, std::string::npos);
  util::write_file(dir_ / kManifestName,
                   manifest.substr(0, pos) + "\"version\": 2" + manifest.substr(pos + 12));
  EXPECT_EQ(code_of([&] { ModelStore::open(dir_); }), ErrorCode::kVersionMismatch);
  util::write_file(dir_ / kManifestName, "{not json");
  EXPECT_EQ(code_of([&] { ModelStore::open(dir_); }), ErrorCode::kFormat);
  util::write_file(dir_ / kManifestName, manifest);
  EXPECT_NO_THROW(ModelStore::open(dir_));
  fs::remove(dir_ / kManifestName);
  EXPECT_EQ(code_of([&] { ModelStore::open(dir_); }), ErrorCode::kIo);
}

TEST_F(Store, UnsafeArtifactPathRejected) {
  StoreManifest m;
  m.model = {"../outside.bin", "00000000", ""};
  EXPECT_THROW(StoreManifest::from_json(m.to_json()), FormatError);
}

TEST_F(Store, ManifestJsonRoundTrip) {
  StoreManifest m;
  m.model = {"model.bin", "0badf00d", ""};
  m.cache = StoreManifest::Artifact{"rowcache.bin", "12345678", ""};
  m.indices.push_back({"index.lsh.bin", "abcdef01", "lsh"});
  m.seed = 99;
  m.config_hash = "cafebabe";
  EXPECT_EQ(StoreManifest::from_json(m.to_json()).to_json(), m.to_json());
}

TEST_F(Store, IndicesLoadAndRegenerateBitExact) {
  save_store(dir_, model_, ModelFormat::kWord2VecBinary, 1, hash_);
  add_index_to_store(dir_, build_lsh(model_, 12, 4));
  add_index_to_store(dir_, spherical_kmeans(model_, 4, 30, 4));
  const std::string first = util::read_file(dir_ / "index.lsh.bin");
  const std::string first_km = util::read_file(dir_ / "index.kmeans.bin");
  add_index_to_store(dir_, build_lsh(model_, 12, 4));
  add_index_to_store(dir_, spherical_kmeans(model_, 4, 30, 4));
  EXPECT_EQ(util::read_file(dir_ / "index.lsh.bin"), first);
  EXPECT_EQ(util::read_file(dir_ / "index.kmeans.bin"), first_km);

  const ModelStore s = ModelStore::open(dir_);
  EXPECT_EQ(s.manifest().indices.size(), 2u);
  ASSERT_TRUE(s.indices().lsh);
  ASSERT_TRUE(s.indices().kmeans);
  EXPECT_EQ(serialize_lsh(*s.indices().lsh, model_fingerprint(model_)), first);
  const auto q = to_vec(model_.vector(3));
  const TopKResult exact = top_k(q, 5, s.model());
  const TopKResult all = top_k(q, 5, s.model(), Strategy::kmeans(4), s.indices());
  ASSERT_EQ(exact.entries.size(), all.entries.size());
  for (std::size_t i = 0; i < exact.entries.size(); ++i) {
    EXPECT_EQ(exact.entries[i].token, all.entries[i].token);
  }
}

TEST_F(Store, IndexForAnotherModelRejected) {
  save_store(dir_, model_, ModelFormat::kWord2VecBinary, 1, hash_);
  add_index_to_store(dir_, build_lsh(model_, 8, 1));
  const std::string stale = util::read_file(dir_ / "index.lsh.bin");
  const StoreManifest old = StoreManifest::from_json(util::read_file(dir_ / kManifestName));

  // Retrain with another seed, then put the stale index back.
  TrainingConfig cfg;
  cfg.dimension = 8;
  cfg.epochs = 3;
  cfg.threads = 1;
  cfg.seed = 12;
  save_store(dir_, train(testing::two_group_corpus(20, 3), cfg), ModelFormat::kWord2VecBinary, 1,
             hash_);
  StoreManifest m = StoreManifest::from_json(util::read_file(dir_ / kManifestName));
  EXPECT_TRUE(m.indices.empty());
  m.indices = old.indices;
  util::write_file(dir_ / "index.lsh.bin", stale);
  util::write_file(dir_ / kManifestName, m.to_json());
  EXPECT_EQ(code_of([&] { ModelStore::open(dir_); }), ErrorCode::kVersionMismatch);
}

TEST_F(Store, CacheStoredAndConfigHashChecked) {
  const RelationalTable t = sales();
  const TableEncoders enc = fit_table_encoders(t);
  const EmbeddingModel m = testing::random_model(5, model_.dim(), 2);
  RowAttributeCache c = build_row_attribute_cache(t, enc, m, OovPolicy::kSkipWithDefault);
  save_store(dir_, m, ModelFormat::kWord2VecBinary, 1, hash_, &c);
  {
    const ModelStore s = ModelStore::open(dir_);
    ASSERT_TRUE(s.cache());
    EXPECT_EQ(s.cache()->config_hash(), hash_);
    EXPECT_EQ(s.cache()->num_rows(), c.num_rows());
    EXPECT_TRUE(s.warnings().empty());
  }
  c.set_config_hash("00000000");
  save_store(dir_, m, ModelFormat::kWord2VecBinary, 1, hash_, &c);
  const ModelStore s = ModelStore::open(dir_);
  ASSERT_EQ(s.warnings().size(), 1u);
  EXPECT_NE(s.warnings()[0].find("00000000"), std::string::npos);
}

TEST_F(Store, CacheDimensionMustMatch) {
  RowAttributeCache c(model_.dim() + 1);
  c.put("sales", "custa", "amount", Vec(model_.dim() + 1, 0.5));
  save_store(dir_, model_, ModelFormat::kWord2VecBinary, 1, hash_, &c);
  EXPECT_EQ(code_of([&] { ModelStore::open(dir_); }), ErrorCode::kDimensionMismatch);
}

TEST(ConfigHash, StableAndSensitive) {
  TrainingConfig a;
  a.seed = 1;
  TrainingConfig b = a;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 8u);
  b.window = a.window + 1;
  EXPECT_NE(config_hash(a), config_hash(b));
}

}  // namespace
}  // namespace cogdb
