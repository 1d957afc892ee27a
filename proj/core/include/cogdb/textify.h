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

#ifndef COGDB_TEXTIFY_H_
#define COGDB_TEXTIFY_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cogdb/table.h"

namespace cogdb {

class StopWords {
 public:
  // The built-in English list.
  StopWords();
  explicit StopWords(std::unordered_set<std::string> words);

  // One word per line; blank lines and lines starting with '#' are ignored.
  static StopWords from_file(const std::filesystem::path& path);
  static const StopWords& english();

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Lowercase column name with special characters removed and blanks turned into
// underscores ("Cocoa Contents" -> "cocoa_contents").
std::string column_token(std::string_view column_name);

// `<column>_empty`.
std::string empty_marker(std::string_view column_name);

// Converts one text cell into tokens.
//
// Steps, in order: lowercase, drop non-ASCII bytes, split into groups on ','
// or ';', drop special characters, collapse blanks, join multi-word groups
// with '_'. A comma-separated group is one multi-part token. A comma-free cell
// that contained capitals is a single phrase ("Mastiff Dog" -> mastiff_dog);
// an already-lowercase comma-free cell is a blank-separated token list
// ("lion predator" -> lion, predator). Stop words are dropped only when they
// stand alone. An empty result yields `<column>_empty`.
std::vector<std::string> normalize_text_token(
    std::string_view raw, std::string_view column_name,
    const StopWords& stop_words = StopWords::english());

// Free text (external KB lines): every blank-separated word is a token.
std::vector<std::string> normalize_free_text(
    std::string_view line, const StopWords& stop_words = StopWords::english());

// A primary / foreign key value as a single token ("custA" -> custa).
std::string normalize_key(std::string_view raw);

struct NumericEncoder {
  std::string column;              // column token name
  NumericMode mode;
  std::vector<double> centroids;   // kmeans only, ascending
};

// Throws InsufficientData when kmeans(k) sees fewer than k distinct values.
NumericEncoder fit_numeric_encoder(const std::vector<std::optional<double>>& values,
                                   const ColumnSchema& column);

std::string encode_numeric(std::optional<double> value,
                           const ColumnSchema& column,
                           const NumericEncoder& encoder);

// One fitted encoder per numeric column, indexed by column position.
using TableEncoders = std::vector<std::optional<NumericEncoder>>;
TableEncoders fit_table_encoders(const RelationalTable& table);

// Tokens for one cell, exactly as they appear in the training corpus.
std::vector<std::string> cell_tokens(const RelationalTable& table,
                                     const TableEncoders& encoders,
                                     std::size_t row, std::size_t column,
                                     const StopWords& stop_words = StopWords::english());

struct TokenSentence {
  std::optional<std::string> row_key;  // absent for external-KB sentences
  std::vector<std::string> tokens;
  std::vector<std::string> columns;    // source "table.column" per token
  std::string table;
};

struct ForeignKeyLink {
  std::string column;                  // column of the table being textified
  const RelationalTable* target = nullptr;
  const TableEncoders* target_encoders = nullptr;
};

// One sentence per row in column order. A foreign-key column emits the key
// token followed by the referenced row's non-key tokens.
std::vector<TokenSentence> textify_table(
    const RelationalTable& table, const TableEncoders& encoders,
    const std::vector<ForeignKeyLink>& fk_links = {},
    const StopWords& stop_words = StopWords::english());

// Appends the normalized KB lines `repetitions` times; blank lines are skipped.
std::vector<TokenSentence> append_external_kb(
    std::vector<TokenSentence> corpus, const std::vector<std::string>& kb_lines,
    int repetitions, const StopWords& stop_words = StopWords::english());

// One sentence per line, tokens separated by a single blank.
std::string corpus_to_text(const std::vector<TokenSentence>& corpus);

// JSON lines carrying row keys and per-token columns, parallel to the corpus.
std::string corpus_layout_to_text(const std::vector<TokenSentence>& corpus);

// Parses a corpus file; `layout` (optional) restores row keys and columns.
// Throws FormatError on a layout that does not match the corpus.
std::vector<TokenSentence> corpus_from_text(std::string_view corpus,
                                            std::string_view layout = {});

}  // namespace cogdb

#endif  // COGDB_TEXTIFY_H_
