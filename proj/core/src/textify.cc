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

#include "cogdb/textify.h"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "cogdb/error.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

constexpr const char* kEnglishStopWords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an",
    "and", "any", "are", "as", "at", "be", "because", "been", "before",
    "being", "below", "between", "both", "but", "by", "can", "could", "did",
    "do", "does", "doing", "down", "during", "each", "few", "for", "from",
    "further", "had", "has", "have", "having", "he", "her", "here", "hers",
    "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is",
    "it", "its", "itself", "just", "me", "more", "most", "my", "myself", "no",
    "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other",
    "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should",
    "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through",
    "to", "too", "under", "until", "up", "very", "was", "we", "were", "what",
    "when", "where", "which", "while", "who", "whom", "why", "will", "with",
    "would", "you", "your", "yours", "yourself", "yourselves"};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alnum_lower(char c) { return (c >= 'a' && c <= 'z') || is_digit(c); }
bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string strip_non_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (static_cast<unsigned char>(c) < 0x80) out += c;
  }
  return out;
}

// Keeps [a-z0-9_], blanks, and '.' between two digits; drops everything else.
std::string strip_special(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (is_alnum_lower(c) || c == '_') {
      out += c;
    } else if (is_blank(c)) {
      out += ' ';
    } else if (c == '.' && i > 0 && i + 1 < s.size() && is_digit(s[i - 1]) &&
               is_digit(s[i + 1])) {
      out += c;
    }
  }
  return out;
}

bool has_alnum(std::string_view token) {
  return std::any_of(token.begin(), token.end(), is_alnum_lower);
}

// Single-token rendering: lowercase, ASCII only, specials dropped, blanks
// joined by '_'.
std::string compact_token(std::string_view raw) {
  const std::string cleaned = strip_special(strip_non_ascii(util::to_lower(raw)));
  return util::join(util::split_whitespace(cleaned), "_");
}

std::string numeric_text(std::string text) {
  std::string out;
  const bool negative = !text.empty() && text.front() == '-';
  if (negative) {
    const bool all_zero = std::all_of(text.begin() + 1, text.end(), [](char c) {
      return c == '0' || c == '.';
    });
    if (!all_zero) out = "neg";
    text.erase(text.begin());
  }
  for (char c : text) {
    if (c == '.') {
      out += '_';
    } else if (c == '+') {
      continue;
    } else if (c == '-') {
      out += "neg";
    } else {
      out += c;
    }
  }
  return out;
}

std::size_t nearest_centroid(const std::vector<double>& centroids, double v) {
  std::size_t best = 0;
  double best_d = std::abs(v - centroids[0]);
  for (std::size_t i = 1; i < centroids.size(); ++i) {
    const double d = std::abs(v - centroids[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<double> kmeans_1d(std::vector<double> values, int k) {
  std::sort(values.begin(), values.end());
  std::vector<double> distinct = values;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t kk = static_cast<std::size_t>(k);
  if (distinct.size() < kk) {
    throw Error(ErrorCode::kInsufficientData,
                "kmeans(k=" + std::to_string(k) + ") needs at least k distinct "
                "values, got " + std::to_string(distinct.size()));
  }
  // Evenly spaced quantiles of the distinct values.
  std::vector<double> centroids(kk);
  for (std::size_t i = 0; i < kk; ++i) {
    const auto idx = static_cast<std::size_t>(
        std::floor((static_cast<double>(i) + 0.5) *
                   static_cast<double>(distinct.size()) / static_cast<double>(kk)));
    centroids[i] = distinct[std::min(idx, distinct.size() - 1)];
  }
  constexpr int kMaxIters = 100;
  constexpr double kTol = 1e-9;
  std::vector<double> sums(kk);
  std::vector<std::size_t> counts(kk);
  for (int iter = 0; iter < kMaxIters; ++iter) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (double v : values) {
      const std::size_t c = nearest_centroid(centroids, v);
      sums[c] += v;
      ++counts[c];
    }
    bool converged = true;
    for (std::size_t i = 0; i < kk; ++i) {
      if (counts[i] == 0) continue;
      const double next = sums[i] / static_cast<double>(counts[i]);
      if (std::abs(next - centroids[i]) > kTol * std::max(1.0, std::abs(centroids[i]))) {
        converged = false;
      }
      centroids[i] = next;
    }
    if (converged) break;
  }
  std::sort(centroids.begin(), centroids.end());
  return centroids;
}

}  // namespace

StopWords::StopWords()
    : words_(std::begin(kEnglishStopWords), std::end(kEnglishStopWords)) {}

StopWords::StopWords(std::unordered_set<std::string> words)
    : words_(std::move(words)) {}

StopWords StopWords::from_file(const std::filesystem::path& path) {
  std::unordered_set<std::string> words;
  for (const std::string& line : util::split(util::read_file(path), '\n')) {
    const std::string_view w = util::trim(line);
    if (w.empty() || w.front() == '#') continue;
    words.insert(util::to_lower(w));
  }
  return StopWords(std::move(words));
}

const StopWords& StopWords::english() {
  static const StopWords kEnglish;
  return kEnglish;
}

bool StopWords::contains(std::string_view word) const {
  return words_.count(std::string(word)) > 0;
}

std::string column_token(std::string_view column_name) {
  return compact_token(column_name);
}

std::string empty_marker(std::string_view column_name) {
  return column_token(column_name) + "_empty";
}

std::vector<std::string> normalize_text_token(std::string_view raw,
                                              std::string_view column_name,
                                              const StopWords& stop_words) {
  const bool has_upper = std::any_of(raw.begin(), raw.end(), [](char c) {
    return c >= 'A' && c <= 'Z';
  });
  const std::string ascii = strip_non_ascii(util::to_lower(raw));

  std::vector<std::string> groups;
  {
    std::string cur;
    for (char c : ascii) {
      if (c == ',' || c == ';') {
        groups.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    groups.push_back(std::move(cur));
  }
  const bool phrase_mode = groups.size() > 1 || has_upper;

  std::vector<std::string> out;
  for (const std::string& group : groups) {
    std::vector<std::string> words = util::split_whitespace(strip_special(group));
    words.erase(std::remove_if(words.begin(), words.end(),
                               [](const std::string& w) { return !has_alnum(w); }),
                words.end());
    if (words.empty()) continue;
    if (phrase_mode) {
      if (words.size() == 1 && stop_words.contains(words[0])) continue;
      out.push_back(util::join(words, "_"));
    } else {
      for (std::string& w : words) {
        if (!stop_words.contains(w)) out.push_back(std::move(w));
      }
    }
  }
  if (out.empty()) out.push_back(empty_marker(column_name));
  return out;
}

std::vector<std::string> normalize_free_text(std::string_view line,
                                             const StopWords& stop_words) {
  std::vector<std::string> out;
  const std::string ascii = strip_non_ascii(util::to_lower(line));
  std::string spaced = ascii;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::replace(spaced.begin(), spaced.end(), ';', ' ');
  for (std::string& w : util::split_whitespace(strip_special(spaced))) {
    if (has_alnum(w) && !stop_words.contains(w)) out.push_back(std::move(w));
  }
  return out;
}

std::string normalize_key(std::string_view raw) {
  std::string key = compact_token(raw);
  if (key.empty()) {
    throw Error(ErrorCode::kSchema,
                "key value '" + std::string(raw) + "' normalizes to nothing");
  }
  return key;
}

NumericEncoder fit_numeric_encoder(const std::vector<std::optional<double>>& values,
                                   const ColumnSchema& column) {
  NumericEncoder enc;
  enc.column = column_token(column.name);
  enc.mode = column.numeric_mode;
  if (enc.mode.kind == NumericMode::Kind::kKMeans) {
    if (enc.mode.k < 1) throw Error(ErrorCode::kSchema, "kmeans k must be >= 1");
    std::vector<double> present;
    for (const auto& v : values) {
      if (v) present.push_back(*v);
    }
    enc.centroids = kmeans_1d(std::move(present), enc.mode.k);
  }
  return enc;
}

std::string encode_numeric(std::optional<double> value, const ColumnSchema& column,
                           const NumericEncoder& encoder) {
  const std::string col = column_token(column.name);
  if (!value) return col + "_empty";
  const double v = *value;
  const std::string prefix = column.prepend_name ? col + "_" : std::string();
  switch (encoder.mode.kind) {
    case NumericMode::Kind::kLiteral:
      return col + "_" + numeric_text(util::format_double(v));
    case NumericMode::Kind::kRounded:
      return col + "_" +
             numeric_text(util::format_fixed(v, std::max(0, encoder.mode.precision)));
    case NumericMode::Kind::kRangeRule:
      for (const RangeRule& r : encoder.mode.ranges) {
        if (v < r.upper) return prefix + compact_token(r.token);
      }
      return col + "_out_of_range";
    case NumericMode::Kind::kKMeans:
      if (encoder.centroids.empty()) {
        throw Error(ErrorCode::kConfig, "kmeans encoder for " + col + " not fitted");
      }
      return prefix + "cluster_" +
             std::to_string(nearest_centroid(encoder.centroids, v));
  }
  return col + "_empty";
}

TableEncoders fit_table_encoders(const RelationalTable& table) {
  TableEncoders encoders(table.num_columns());
  for (std::size_t c = 0; c < table.num_columns(); ++c) {
    const ColumnSchema& col = table.columns()[c];
    if (col.kind != ColumnKind::kNumeric) continue;
    std::vector<std::optional<double>> values;
    values.reserve(table.num_rows());
    for (const auto& row : table.rows()) {
      if (const auto* d = std::get_if<double>(&row[c])) {
        values.emplace_back(*d);
      } else {
        values.emplace_back(std::nullopt);
      }
    }
    encoders[c] = fit_numeric_encoder(values, col);
  }
  return encoders;
}

std::vector<std::string> cell_tokens(const RelationalTable& table,
                                     const TableEncoders& encoders,
                                     std::size_t row, std::size_t column,
                                     const StopWords& stop_words) {
  const ColumnSchema& col = table.columns().at(column);
  const Cell& cell = table.rows().at(row).at(column);
  switch (col.kind) {
    case ColumnKind::kPrimaryKey:
      return {normalize_key(cell_to_string(cell))};
    case ColumnKind::kNumeric: {
      if (column >= encoders.size() || !encoders[column]) {
        throw Error(ErrorCode::kConfig, "no fitted encoder for column " + col.name);
      }
      std::optional<double> v;
      if (const auto* d = std::get_if<double>(&cell)) v = *d;
      return {encode_numeric(v, col, *encoders[column])};
    }
    case ColumnKind::kImageRef: {
      if (is_missing(cell)) return {empty_marker(col.name)};
      const std::filesystem::path p(cell_to_string(cell));
      std::string token = compact_token(p.stem().string());
      if (token.empty()) return {empty_marker(col.name)};
      return {col.prepend_name ? column_token(col.name) + "_" + token : token};
    }
    case ColumnKind::kText: {
      if (is_missing(cell)) return {empty_marker(col.name)};
      std::vector<std::string> tokens =
          normalize_text_token(cell_to_string(cell), col.name, stop_words);
      if (col.prepend_name) {
        const std::string marker = empty_marker(col.name);
        for (std::string& t : tokens) {
          if (t != marker) t = column_token(col.name) + "_" + t;
        }
      }
      return tokens;
    }
  }
  return {};
}

std::vector<TokenSentence> textify_table(const RelationalTable& table,
                                         const TableEncoders& encoders,
                                         const std::vector<ForeignKeyLink>& fk_links,
                                         const StopWords& stop_words) {
  std::vector<const ForeignKeyLink*> link_of(table.num_columns(), nullptr);
  for (const ForeignKeyLink& link : fk_links) {
    auto idx = table.column_index(link.column);
    if (!idx) {
      throw Error(ErrorCode::kSchema, "foreign key column '" + link.column +
                                          "' not in table " + table.name());
    }
    if (link.target == nullptr || link.target_encoders == nullptr) {
      throw Error(ErrorCode::kConfig, "foreign key link on '" + link.column +
                                          "' has no target table");
    }
    link_of[*idx] = &link;
  }

  const std::string table_token = column_token(table.name());
  std::vector<TokenSentence> corpus;
  corpus.reserve(table.num_rows());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    TokenSentence s;
    s.table = table.name();
    for (std::size_t c = 0; c < table.num_columns(); ++c) {
      const std::string col_name = table_token + "." + column_token(table.columns()[c].name);
      const ForeignKeyLink* link = link_of[c];
      const Cell& cell = table.rows()[r][c];
      if (link != nullptr && !is_missing(cell)) {
        const std::string raw = cell_to_string(cell);
        s.tokens.push_back(normalize_key(raw));
        s.columns.push_back(col_name);
        const RelationalTable& target = *link->target;
        auto target_row = target.find_row(raw);
        if (!target_row) {
          throw Error(ErrorCode::kDanglingForeignKey,
                      table.name() + "." + table.columns()[c].name + " = '" + raw +
                          "' has no row in " + target.name());
        }
        const std::string target_token = column_token(target.name());
        for (std::size_t tc = 0; tc < target.num_columns(); ++tc) {
          if (tc == target.key_column()) continue;
          const std::string tcol =
              target_token + "." + column_token(target.columns()[tc].name);
          for (std::string& t : cell_tokens(target, *link->target_encoders,
                                            *target_row, tc, stop_words)) {
            s.tokens.push_back(std::move(t));
            s.columns.push_back(tcol);
          }
        }
        continue;
      }
      if (link != nullptr) {
        s.tokens.push_back(empty_marker(table.columns()[c].name));
        s.columns.push_back(col_name);
        continue;
      }
      for (std::string& t : cell_tokens(table, encoders, r, c, stop_words)) {
        if (c == table.key_column()) s.row_key = t;
        s.tokens.push_back(std::move(t));
        s.columns.push_back(col_name);
      }
    }
    corpus.push_back(std::move(s));
  }
  return corpus;
}

std::vector<TokenSentence> append_external_kb(std::vector<TokenSentence> corpus,
                                              const std::vector<std::string>& kb_lines,
                                              int repetitions,
                                              const StopWords& stop_words) {
  if (repetitions < 1) {
    throw Error(ErrorCode::kConfig, "external KB repetitions must be >= 1");
  }
  std::vector<TokenSentence> kb;
  for (const std::string& line : kb_lines) {
    TokenSentence s;
    s.tokens = normalize_free_text(line, stop_words);
    if (s.tokens.empty()) continue;
    s.columns.assign(s.tokens.size(), std::string());
    s.table = "external_kb";
    kb.push_back(std::move(s));
  }
  for (int rep = 0; rep < repetitions; ++rep) {
    corpus.insert(corpus.end(), kb.begin(), kb.end());
  }
  return corpus;
}

std::string corpus_to_text(const std::vector<TokenSentence>& corpus) {
  std::string out;
  for (const TokenSentence& s : corpus) {
    out += util::join(s.tokens, " ");
    out += '\n';
  }
  return out;
}

std::string corpus_layout_to_text(const std::vector<TokenSentence>& corpus) {
  std::string out;
  for (const TokenSentence& s : corpus) {
    nlohmann::json line;
    line["table"] = s.table;
    line["row_key"] = s.row_key ? nlohmann::json(*s.row_key) : nlohmann::json();
    line["columns"] = s.columns;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<TokenSentence> corpus_from_text(std::string_view corpus,
                                            std::string_view layout) {
  std::vector<TokenSentence> out;
  std::size_t offset = 0;
  for (const std::string& line : util::split(corpus, '\n')) {
    TokenSentence s;
    s.tokens = util::split_whitespace(line);
    for (const std::string& t : s.tokens) {
      for (char c : t) {
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
          throw FormatError("corpus contains a non-printable byte", offset);
        }
      }
    }
    offset += line.size() + 1;
    if (s.tokens.empty()) continue;
    s.columns.assign(s.tokens.size(), std::string());
    out.push_back(std::move(s));
  }
  if (layout.empty()) return out;

  std::size_t i = 0;
  offset = 0;
  for (const std::string& line : util::split(layout, '\n')) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (util::trim(line).empty()) continue;
    if (i >= out.size()) throw FormatError("layout has more lines than corpus", line_offset);
    try {
      const auto j = nlohmann::json::parse(line);
      TokenSentence& s = out[i];
      s.table = j.value("table", std::string());
      if (j.contains("row_key") && !j["row_key"].is_null()) {
        s.row_key = j["row_key"].get<std::string>();
      }
      auto columns = j.at("columns").get<std::vector<std::string>>();
      if (columns.size() != s.tokens.size()) {
        throw FormatError("layout column count mismatch on sentence " +
                              std::to_string(i + 1), line_offset);
      }
      s.columns = std::move(columns);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("bad layout line: ") + e.what(), line_offset);
    }
    ++i;
  }
  if (i != out.size()) throw FormatError("layout has fewer lines than corpus", offset);
  return out;
}

}  // namespace cogdb
