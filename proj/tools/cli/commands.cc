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

#include "cli/commands.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "cli/project_config.h"
#include "cogdb/ann.h"
#include "cogdb/model_store.h"
#include "cogdb/query/executor.h"
#include "cogdb/textify.h"
#include "cogdb/util/checksum.h"
#include "cogdb/util/log.h"
#include "cogdb/util/strings.h"

namespace cogdb::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kInvalidK:
      return kExitConfig;
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kInsufficientData:
    case ErrorCode::kMalformedHierarchy:
    case ErrorCode::kSchema:
    case ErrorCode::kDanglingForeignKey:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kFormat:
    case ErrorCode::kZeroVector:
    case ErrorCode::kChecksumMismatch:
    case ErrorCode::kVersionMismatch:
      return kExitData;
    case ErrorCode::kAllTokensUnknown:
    case ErrorCode::kUnknownKey:
    case ErrorCode::kInvalidFlag:
    case ErrorCode::kDegenerateDirection:
    case ErrorCode::kUnknownConcept:
    case ErrorCode::kSyntax:
    case ErrorCode::kUnknownFunction:
    case ErrorCode::kUnknownTable:
    case ErrorCode::kUnknownColumn:
    case ErrorCode::kType:
    case ErrorCode::kUdf:
    case ErrorCode::kUnconstrainedTokenVariable:
    case ErrorCode::kNoValidSubstitution:
      return kExitQuery;
  }
  return kExitInternal;
}

namespace {

enum class OutputFormat { kTable, kCsv, kJson };

std::optional<OutputFormat> parse_format(std::string_view s) {
  const std::string f = util::to_lower(s);
  if (f == "table") return OutputFormat::kTable;
  if (f == "csv") return OutputFormat::kCsv;
  if (f == "json" || f == "jsonl") return OutputFormat::kJson;
  return std::nullopt;
}

std::string render(const query::QueryResult& r, OutputFormat f) {
  switch (f) {
    case OutputFormat::kCsv: return query::format_csv(r);
    case OutputFormat::kJson: return query::format_json_lines(r);
    case OutputFormat::kTable: break;
  }
  return query::format_table(r);
}

// Prints the offending line of `sql` with a caret under the column.
void print_syntax_error(const SyntaxError& e, std::string_view sql, std::ostream& err) {
  err << "error: syntax: " << e.detail() << " (line " << e.line() << ", column " << e.column()
      << ")\n";
  const std::vector<std::string> lines = util::split(sql, '\n');
  if (e.line() >= 1 && e.line() <= lines.size()) {
    const std::string& l = lines[e.line() - 1];
    err << "  " << l << "\n  " << std::string(e.column() > 0 ? e.column() - 1 : 0, ' ') << "^\n";
  }
}

void print_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
}

struct CommonOptions {
  std::string config;
  std::string store;  // overrides the config's store directory
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_store) {
  cmd->add_option("-c,--config", o.config, "Project config file (JSON)")->required();
  if (with_store) {
    cmd->add_option("--store", o.store, "Model store directory (overrides the config)");
  }
}

ProjectConfig load_config(const CommonOptions& o) {
  ProjectConfig cfg = ProjectConfig::load(o.config);
  if (!o.store.empty()) cfg.store = o.store;
  return cfg;
}

// Model, catalog and indices for query-style commands. Kept behind a pointer
// because the exec options point into it.
struct Session {
  ProjectConfig cfg;
  ModelStore store;
  std::optional<ModelStore> ext;
  query::Catalog catalog;
  query::ExecOptions exec;
  OutputFormat format = OutputFormat::kTable;
  bool timing = false;
};

std::unique_ptr<Session> open_session(ProjectConfig cfg, const std::string& strategy) {
  const Strategy strat = Strategy::parse(strategy);
  ModelStore store = ModelStore::open(cfg.store);
  query::Catalog catalog = load_catalog(cfg);
  auto s = std::unique_ptr<Session>(
      new Session{std::move(cfg), std::move(store), std::nullopt, std::move(catalog), {}, {}, {}});
  if (s->cfg.ext_store) s->ext = ModelStore::open(*s->cfg.ext_store);
  s->exec.udf.model = &s->store.model();
  s->exec.udf.ext_model = s->ext ? &s->ext->model() : nullptr;
  s->exec.udf.cache = s->store.cache();
  s->exec.udf.oov = s->cfg.oov;
  s->exec.strategy = strat;
  s->exec.indices = s->store.indices();
  if (strat.kind == Strategy::Kind::kLsh && !s->exec.indices.lsh) {
    throw Error(ErrorCode::kConfig, "strategy " + strat.to_string() +
                                        " needs an LSH index; run `cogdb index` first");
  }
  if (strat.kind == Strategy::Kind::kKMeans && !s->exec.indices.kmeans) {
    throw Error(ErrorCode::kConfig, "strategy " + strat.to_string() +
                                        " needs a k-means index; set index.kmeans_k and run "
                                        "`cogdb index`");
  }
  return s;
}

// Returns an exit code; errors are reported on `err`.
int run_statement(Session& s, const std::string& sql, std::ostream& out, std::ostream& err) {
  query::ExecStats stats;
  s.exec.stats = &stats;
  const auto start = std::chrono::steady_clock::now();
  try {
    const query::QueryResult r = query::run_query(sql, s.catalog, s.exec);
    out << render(r, s.format);
  } catch (const SyntaxError& e) {
    print_syntax_error(e, sql, err);
    return kExitQuery;
  } catch (const Error& e) {
    print_error(e, err);
    return exit_code_for(e.code());
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  util::log(util::LogLevel::kDebug, "query_done",
            {{"bindings", std::to_string(stats.bindings_examined)},
             {"udf_calls", std::to_string(stats.udf_calls)},
             {"memo_hits", std::to_string(stats.memo_hits)},
             {"rows_pruned", std::to_string(stats.rows_pruned)},
             {"expansions", std::to_string(stats.expansions)}});
  if (s.timing) err << "Time: " << util::format_fixed(ms, 3) << " ms\n";
  return kExitOk;
}

// ---- textify -----------------------------------------------------------------

struct TextifyOptions {
  CommonOptions common;
  std::string out;
};

int cmd_textify(const TextifyOptions& o, std::ostream& out) {
  ProjectConfig cfg = load_config(o.common);
  if (!o.out.empty()) cfg.corpus = o.out;
  const query::Catalog catalog = load_catalog(cfg);

  std::vector<TokenSentence> corpus;
  std::size_t rows = 0;
  for (const auto& t : catalog.tables()) {
    if (t->table.num_rows() == 0) {
      throw Error(ErrorCode::kEmptyCorpus, "table " + t->table.name() + " has no rows");
    }
    std::vector<ForeignKeyLink> links;
    for (const ForeignKeySpec& fk : cfg.foreign_keys) {
      if (!util::iequals(fk.table, t->table.name())) continue;
      const query::CatalogTable* target = catalog.find(fk.references);
      if (!target) {
        throw Error(ErrorCode::kConfig, "foreign key " + fk.table + "." + fk.column +
                                            " references unknown table " + fk.references);
      }
      links.push_back({fk.column, &target->table, &target->encoders});
    }
    std::vector<TokenSentence> s =
        textify_table(t->table, t->encoders, links, catalog.stop_words());
    rows += t->table.num_rows();
    corpus.insert(corpus.end(), std::make_move_iterator(s.begin()),
                  std::make_move_iterator(s.end()));
  }
  const std::size_t table_sentences = corpus.size();
  for (const KbSource& kb : cfg.external_kb) {
    const std::vector<std::string> lines = util::split(util::read_file(kb.path), '\n');
    corpus = append_external_kb(std::move(corpus), lines, kb.repetitions, catalog.stop_words());
  }

  std::set<std::string> vocab;
  for (const TokenSentence& s : corpus) vocab.insert(s.tokens.begin(), s.tokens.end());

  if (cfg.corpus.has_parent_path()) fs::create_directories(cfg.corpus.parent_path());
  const std::string text = corpus_to_text(corpus);
  util::write_file(cfg.corpus, text);
  util::write_file(cfg.layout_path(), corpus_layout_to_text(corpus));
  util::log(util::LogLevel::kInfo, "corpus_written",
            {{"path", cfg.corpus.string()}, {"crc32", util::hex32(util::crc32(text))}});
  out << "tables=" << catalog.tables().size() << " rows=" << rows
      << " sentences=" << corpus.size() << " kb_sentences=" << corpus.size() - table_sentences
      << " vocab_estimate=" << vocab.size() << " corpus=" << cfg.corpus.string() << "\n";
  return kExitOk;
}

// ---- train -------------------------------------------------------------------

struct TrainOptions {
  CommonOptions common;
  std::string corpus;
  std::string base;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string format;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
  ProjectConfig cfg = load_config(o.common);
  if (!o.corpus.empty()) cfg.corpus = o.corpus;
  if (o.seed) cfg.training.seed = *o.seed;
  if (o.threads) cfg.training.threads = *o.threads;
  if (!o.format.empty()) {
    auto f = parse_model_format(o.format);
    if (!f) throw Error(ErrorCode::kConfig, "unknown --format '" + o.format + "'");
    cfg.model_format = *f;
  }
  cfg.training.validate();

  const std::string text = util::read_file(cfg.corpus);
  const std::string layout =
      fs::exists(cfg.layout_path()) ? util::read_file(cfg.layout_path()) : std::string{};
  const std::vector<TokenSentence> corpus = corpus_from_text(text, layout);

  util::log(util::LogLevel::kInfo, "train_start",
            {{"params", cfg.training.parameter_string()},
             {"sentences", std::to_string(corpus.size())},
             {"mode", o.base.empty() ? "full" : "incremental"}});
  const auto start = std::chrono::steady_clock::now();
  EmbeddingModel model;
  if (o.base.empty()) {
    model = train(corpus, cfg.training);
  } else {
    const ModelStore base = ModelStore::open(o.base);
    model = train_incremental(base.model(), corpus, cfg.training);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const query::Catalog catalog = load_catalog(cfg);
  RowAttributeCache cache(model.dim());
  for (const auto& t : catalog.tables()) {
    extend_row_attribute_cache(cache, t->table, t->encoders, model, cfg.oov,
                               catalog.stop_words());
  }
  const std::string hash = config_hash(cfg.training);
  cache.set_config_hash(hash);
  save_store(cfg.store, model, cfg.model_format, cfg.training.seed, hash, &cache);
  util::log(util::LogLevel::kInfo, "train_done",
            {{"tokens", std::to_string(model.size())},
             {"seconds", util::format_fixed(secs, 3)}});
  out << "tokens=" << model.size() << " dim=" << model.dim()
      << " format=" << model_format_name(cfg.model_format) << " config_hash=" << hash
      << " store=" << cfg.store.string() << "\n";
  return kExitOk;
}

// ---- index -------------------------------------------------------------------

struct IndexOptions {
  CommonOptions common;
  std::optional<int> lsh_bits;
  std::optional<std::size_t> kmeans_k;
  std::optional<std::uint64_t> seed;
  bool no_lsh = false;
};

int cmd_index(const IndexOptions& o, std::ostream& out) {
  ProjectConfig cfg = load_config(o.common);
  const int bits = o.lsh_bits ? *o.lsh_bits : static_cast<int>(cfg.lsh_bits);
  const std::size_t k = o.kmeans_k ? *o.kmeans_k : cfg.kmeans_k;
  const std::uint64_t seed = o.seed ? *o.seed : cfg.index_seed;
  if (!o.no_lsh && (bits < 1 || bits > 64)) {
    throw Error(ErrorCode::kConfig, "lsh bits must be in 1..64");
  }
  const ModelStore store = ModelStore::open(cfg.store);
  if (!o.no_lsh) {
    const LshIndex lsh = build_lsh(store.model(), bits, seed);
    add_index_to_store(cfg.store, lsh);
    out << "lsh bits=" << bits << " buckets=" << lsh.buckets.size() << "\n";
  }
  if (k > 0) {
    const SphericalKMeansIndex km = spherical_kmeans(store.model(), k, cfg.kmeans_iters, seed);
    add_index_to_store(cfg.store, km);
    out << "kmeans k=" << k << " iterations=" << km.iterations << " objective="
        << util::format_fixed(km.objective_history.empty() ? 0.0 : km.objective_history.back(),
                              6)
        << "\n";
  }
  return kExitOk;
}

// ---- query / repl ------------------------------------------------------------

struct QueryOptions {
  CommonOptions common;
  std::string sql;
  std::string file;
  std::string strategy = "exact";
  std::string format = "table";
  bool timing = false;
};

int cmd_query(const QueryOptions& o, std::ostream& out, std::ostream& err) {
  if (o.sql.empty() == o.file.empty()) {
    throw Error(ErrorCode::kConfig, "give exactly one of -e/--execute or -f/--file");
  }
  const auto fmt = parse_format(o.format);
  if (!fmt) throw Error(ErrorCode::kConfig, "unknown --format '" + o.format + "'");
  const std::string sql = o.sql.empty() ? util::read_file(o.file) : o.sql;
  auto s = open_session(load_config(o.common), o.strategy);
  s->format = *fmt;
  s->timing = o.timing;
  return run_statement(*s, sql, out, err);
}

struct ReplOptions {
  CommonOptions common;
  std::string strategy = "exact";
  std::string format = "table";
};

bool statement_complete(const std::string& buf) {
  // A ';' outside quotes and comments ends the statement.
  char quote = 0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const char c = buf[i];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"' || c == '`') {
      quote = c;
    } else if (c == '-' && i + 1 < buf.size() && buf[i + 1] == '-') {
      while (i < buf.size() && buf[i] != '\n') ++i;
    } else if (c == ';') {
      return true;
    }
  }
  return false;
}

int cmd_repl(const ReplOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto fmt = parse_format(o.format);
  if (!fmt) throw Error(ErrorCode::kConfig, "unknown --format '" + o.format + "'");
  auto s = open_session(load_config(o.common), o.strategy);
  s->format = *fmt;
  const bool interactive = &in == &std::cin && isatty(fileno(stdin));
  std::string buf;
  std::string line;
  if (interactive) out << "cogdb> " << std::flush;
  while (std::getline(in, line)) {
    const std::string_view t = util::trim(line);
    if (buf.empty() && !t.empty() && t[0] == '\\') {
      const std::vector<std::string> words = util::split_whitespace(t);
      const std::string cmd = words[0];
      if (cmd == "\\q" || cmd == "\\quit") break;
      if (cmd == "\\timing") {
        if (words.size() > 1) {
          s->timing = util::iequals(words[1], "on");
        } else {
          s->timing = !s->timing;
        }
        err << "Timing is " << (s->timing ? "on" : "off") << ".\n";
      } else if (cmd == "\\format") {
        std::optional<OutputFormat> f;
        if (words.size() == 2) f = parse_format(words[1]);
        if (f) {
          s->format = *f;
        } else {
          err << "usage: \\format table|csv|json\n";
        }
      } else if (cmd == "\\strategy") {
        try {
          if (words.size() != 2) throw Error(ErrorCode::kConfig, "usage: \\strategy <s>");
          s->exec.strategy = Strategy::parse(words[1]);
        } catch (const Error& e) {
          print_error(e, err);
        }
      } else if (cmd == "\\tables") {
        for (const auto& tb : s->catalog.tables()) {
          out << tb->table.name() << " (" << tb->table.num_rows() << " rows)\n";
        }
      } else if (cmd == "\\functions") {
        for (const auto& f : query::function_registry()) out << f.signature << "\n";
      } else if (cmd == "\\help" || cmd == "\\?") {
        err << "\\q  \\timing [on|off]  \\format table|csv|json  \\strategy exact|lsh:R|kmeans:N"
               "  \\tables  \\functions\n";
      } else {
        err << "unknown command " << cmd << " (try \\help)\n";
      }
    } else if (!t.empty() || !buf.empty()) {
      buf += line;
      buf += '\n';
      if (statement_complete(buf)) {
        run_statement(*s, buf, out, err);
        buf.clear();
      }
    }
    if (interactive) out << (buf.empty() ? "cogdb> " : "  ...> ") << std::flush;
  }
  if (!util::trim(buf).empty()) run_statement(*s, buf, out, err);
  return kExitOk;
}

// ---- inspect-model -----------------------------------------------------------

struct InspectOptions {
  CommonOptions common;
  std::string token;
  std::size_t k = 10;
  std::string strategy = "exact";
};

int cmd_inspect(const InspectOptions& o, std::ostream& out) {
  const ProjectConfig cfg = load_config(o.common);
  const Strategy strat = Strategy::parse(o.strategy);
  const ModelStore store = ModelStore::open(cfg.store);
  std::string token = o.token;
  if (!store.lookup(token)) token = util::to_lower(token);
  if (!store.lookup(token)) token = normalize_key(o.token);
  const auto vec = store.lookup(token);
  if (!vec) throw Error(ErrorCode::kUnknownKey, "token '" + o.token + "' is not in the model");
  const Vec q = to_vec(*vec);
  const TopKResult r = top_k(q, o.k, store.model(), strat, store.indices(), {token});
  out << "# nearest to " << token << " (" << (r.exact ? "exact" : strat.to_string())
      << ", scored " << r.candidates_scored << ")\n";
  for (const TopKEntry& e : r.entries) {
    out << e.token << "\t" << util::format_fixed(e.score, 6) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Embedding-augmented relational queries: textify tables, train token "
               "vectors, build indices and run semantic SQL.",
               "cogdb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cogdb 0.1.0");
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "Stderr log threshold: debug|info|warn|error")
      ->capture_default_str();

  TextifyOptions textify_o;
  CLI::App* textify = app.add_subcommand("textify", "Turn the configured tables into a corpus");
  add_common(textify, textify_o.common, false);
  textify->add_option("-o,--out", textify_o.out, "Corpus path (overrides the config)");

  TrainOptions train_o;
  CLI::App* trainc = app.add_subcommand("train", "Train token vectors and write the model store");
  add_common(trainc, train_o.common, true);
  trainc->add_option("--corpus", train_o.corpus, "Corpus path (overrides the config)");
  trainc->add_option("--base", train_o.base, "Existing store to continue training from");
  trainc->add_option("--seed", train_o.seed, "RNG seed (overrides the training config)");
  trainc->add_option("--threads", train_o.threads, "Worker threads; 1 is reproducible");
  trainc->add_option("--format", train_o.format, "Model file format: text|binary");

  IndexOptions index_o;
  CLI::App* index = app.add_subcommand("index", "Build nearest-neighbor indices for a store");
  add_common(index, index_o.common, true);
  index->add_option("--lsh-bits", index_o.lsh_bits, "Signature bits for the LSH index (1-64)");
  index->add_option("--kmeans-k", index_o.kmeans_k, "Clusters for the k-means index; 0 skips it");
  index->add_option("--seed", index_o.seed, "Index RNG seed");
  index->add_flag("--no-lsh", index_o.no_lsh, "Skip the LSH index");

  QueryOptions query_o;
  CLI::App* queryc = app.add_subcommand("query", "Run one statement");
  add_common(queryc, query_o.common, true);
  queryc->add_option("-e,--execute", query_o.sql, "Statement text");
  queryc->add_option("-f,--file", query_o.file, "Read the statement from a file");
  queryc->add_option("--strategy", query_o.strategy, "exact | lsh:R | kmeans:N")
      ->capture_default_str();
  queryc->add_option("--format", query_o.format, "Output: table|csv|json")
      ->capture_default_str();
  queryc->add_flag("--timing", query_o.timing, "Report elapsed time on stderr");

  ReplOptions repl_o;
  CLI::App* repl = app.add_subcommand("repl", "Interactive statements terminated by ';'");
  add_common(repl, repl_o.common, true);
  repl->add_option("--strategy", repl_o.strategy, "exact | lsh:R | kmeans:N")
      ->capture_default_str();
  repl->add_option("--format", repl_o.format, "Output: table|csv|json")->capture_default_str();

  InspectOptions inspect_o;
  CLI::App* inspect =
      app.add_subcommand("inspect-model", "Print the nearest neighbors of a token");
  add_common(inspect, inspect_o.common, true);
  inspect->add_option("token", inspect_o.token, "Token to look up")->required();
  inspect->add_option("-k,--top", inspect_o.k, "Neighbors to print")->capture_default_str();
  inspect->add_option("--strategy", inspect_o.strategy, "exact | lsh:R | kmeans:N")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string lvl = util::to_lower(log_level);
  if (lvl == "debug") {
    util::set_min_log_level(util::LogLevel::kDebug);
  } else if (lvl == "warn") {
    util::set_min_log_level(util::LogLevel::kWarn);
  } else if (lvl == "error") {
    util::set_min_log_level(util::LogLevel::kError);
  } else {
    util::set_min_log_level(util::LogLevel::kInfo);
  }

  try {
    if (textify->parsed()) return cmd_textify(textify_o, out);
    if (trainc->parsed()) return cmd_train(train_o, out);
    if (index->parsed()) return cmd_index(index_o, out);
    if (queryc->parsed()) return cmd_query(query_o, out, err);
    if (repl->parsed()) return cmd_repl(repl_o, in, out, err);
    if (inspect->parsed()) return cmd_inspect(inspect_o, out);
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << "\n";
    return kExitQuery;
  } catch (const Error& e) {
    print_error(e, err);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace cogdb::cli
