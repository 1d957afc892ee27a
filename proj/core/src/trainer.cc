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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "cogdb/embedding.h"
#include "cogdb/error.h"
#include "cogdb/util/strings.h"

namespace cogdb {

namespace {

constexpr double kMaxExp = 6.0;

// Single-threaded runs touch the weights directly; parallel runs go through
// relaxed atomics so that concurrent unsynchronized updates stay well defined.
struct PlainAccess {
  static float load(const float& x) { return x; }
  static void add(float& x, float v) { x += v; }
};

struct RelaxedAccess {
  static float load(const float& x) {
    return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
  }
  static void add(float& x, float v) {
    std::atomic_ref<float> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + v, std::memory_order_relaxed);
  }
};

class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ = state_ * 25214903917ULL + 11ULL;
    return state_;
  }

 private:
  std::uint64_t state_;
};

struct EncodedSentence {
  std::vector<std::uint32_t> words;
  std::vector<float> weights;
  std::optional<std::size_t> key_position;
};

float column_weight(const TrainingConfig& cfg, const std::string& column) {
  if (cfg.column_weights.empty() || column.empty()) return 1.0f;
  auto it = cfg.column_weights.find(column);
  if (it != cfg.column_weights.end()) return static_cast<float>(it->second);
  const auto dot = column.find('.');
  if (dot != std::string::npos) {
    it = cfg.column_weights.find(column.substr(dot + 1));
    if (it != cfg.column_weights.end()) return static_cast<float>(it->second);
  }
  return 1.0f;
}

class Trainer {
 public:
  Trainer(const TrainingConfig& cfg, std::vector<std::string> tokens,
          std::vector<std::uint64_t> counts, std::vector<float> syn0,
          std::vector<float> syn1neg, const TrainOptions& options)
      : cfg_(cfg),
        tokens_(std::move(tokens)),
        counts_(std::move(counts)),
        syn0_(std::move(syn0)),
        syn1neg_(std::move(syn1neg)),
        options_(options),
        dim_(static_cast<std::size_t>(cfg.dimension)) {
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
    build_noise_distribution();
  }

  void encode(const std::vector<TokenSentence>& corpus) {
    sentences_.clear();
    total_words_ = 0;
    bool any_key = false;
    for (const TokenSentence& s : corpus) {
      EncodedSentence e;
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        auto it = index_.find(s.tokens[i]);
        if (it == index_.end() || it->second == 0) continue;
        if (s.row_key && !e.key_position && s.tokens[i] == *s.row_key) {
          e.key_position = e.words.size();
        }
        e.words.push_back(static_cast<std::uint32_t>(it->second));
        e.weights.push_back(i < s.columns.size() ? column_weight(cfg_, s.columns[i]) : 1.0f);
      }
      any_key = any_key || e.key_position.has_value();
      total_words_ += e.words.size();
      sentences_.push_back(std::move(e));
    }
    if (cfg_.pk_always_neighbor && !any_key && total_words_ > 0) {
      throw Error(ErrorCode::kConfig,
                  "pk_always_neighbor requires sentences carrying a row key");
    }
  }

  void run() {
    if (total_words_ == 0 || cfg_.negative_samples == 0) return;
    const std::uint64_t budget =
        static_cast<std::uint64_t>(cfg_.epochs) * static_cast<std::uint64_t>(total_words_);
    if (cfg_.threads <= 1) {
      Lcg rng(cfg_.seed);
      std::uint64_t processed = 0;
      for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
        for (std::size_t s = 0; s < sentences_.size(); ++s) {
          train_sentence<PlainAccess>(s, rng, alpha_at(processed, budget));
          processed += sentences_[s].words.size();
        }
      }
      return;
    }
    std::atomic<std::uint64_t> processed{0};
    const std::size_t workers = std::min<std::size_t>(cfg_.threads, sentences_.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        Lcg rng(cfg_.seed + w);
        const std::size_t begin = sentences_.size() * w / workers;
        const std::size_t end = sentences_.size() * (w + 1) / workers;
        for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
          for (std::size_t s = begin; s < end; ++s) {
            train_sentence<RelaxedAccess>(s, rng, alpha_at(processed.load(), budget));
            processed.fetch_add(sentences_[s].words.size());
          }
        }
      });
    }
  }

  std::vector<float> take_syn0() { return std::move(syn0_); }
  std::vector<float> take_syn1neg() { return std::move(syn1neg_); }

 private:
  double alpha_at(std::uint64_t processed, std::uint64_t budget) const {
    const double start = cfg_.learning_rate;
    const double a = start * (1.0 - static_cast<double>(processed) / static_cast<double>(budget + 1));
    return std::max(a, start * 1e-4);
  }

  void build_noise_distribution() {
    noise_cdf_.assign(tokens_.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (i != 0) acc += std::pow(static_cast<double>(counts_[i]), 0.75);
      noise_cdf_[i] = acc;
    }
    noise_total_ = acc;
  }

  std::size_t sample_noise(Lcg& rng) const {
    if (noise_total_ <= 0.0) return 0;
    const double u = static_cast<double>(rng.next() >> 11) * 0x1.0p-53 * noise_total_;
    auto it = std::upper_bound(noise_cdf_.begin(), noise_cdf_.end(), u);
    if (it == noise_cdf_.end()) --it;
    return static_cast<std::size_t>(it - noise_cdf_.begin());
  }

  double gradient(double f, int label, double alpha) const {
    if (f > kMaxExp) return (label - 1) * alpha;
    if (f < -kMaxExp) return label * alpha;
    return (label - 1.0 / (1.0 + std::exp(-f))) * alpha;
  }

  template <typename Access>
  void train_sentence(std::size_t index, Lcg& rng, double alpha) {
    const EncodedSentence& full = sentences_[index];

    // Frequent-token subsampling; the row key always survives.
    std::vector<std::uint32_t> words;
    std::vector<float> weights;
    std::optional<std::size_t> key_position;
    words.reserve(full.words.size());
    weights.reserve(full.words.size());
    const double threshold = cfg_.subsample_threshold * static_cast<double>(total_words_);
    for (std::size_t i = 0; i < full.words.size(); ++i) {
      const bool is_key = full.key_position && *full.key_position == i;
      if (cfg_.subsample_threshold > 0.0 && !is_key) {
        const double f = static_cast<double>(counts_[full.words[i]]);
        const double keep = (std::sqrt(f / threshold) + 1.0) * threshold / f;
        const double r = static_cast<double>(rng.next() & 0xFFFF) / 65536.0;
        if (keep < r) continue;
      }
      if (is_key) key_position = words.size();
      words.push_back(full.words[i]);
      weights.push_back(full.weights[i]);
    }
    if (words.size() < 2) return;

    const WindowOptions window{cfg_.window, cfg_.circular_window, cfg_.uniform_influence};
    std::vector<double> neu1(dim_), neu1e(dim_);
    std::vector<ContextEntry> context;
    for (std::size_t center = 0; center < words.size(); ++center) {
      const int shrink = cfg_.uniform_influence
                             ? 0
                             : static_cast<int>(rng.next() % static_cast<std::uint64_t>(cfg_.window));
      const auto positions = context_positions(
          words.size(), center, window, shrink,
          cfg_.pk_always_neighbor ? key_position : std::nullopt);
      context.clear();
      for (std::size_t p : positions) context.push_back({p, weights[p]});
      if (options_.observer) options_.observer(index, center, context);
      if (context.empty()) continue;

      const std::size_t word = words[center];
      if (cfg_.architecture == Architecture::kCbow) {
        std::fill(neu1.begin(), neu1.end(), 0.0);
        std::fill(neu1e.begin(), neu1e.end(), 0.0);
        for (const ContextEntry& c : context) {
          const float* v = &syn0_[words[c.position] * dim_];
          for (std::size_t k = 0; k < dim_; ++k) neu1[k] += Access::load(v[k]);
        }
        for (double& x : neu1) x /= static_cast<double>(context.size());
        for (int d = 0; d <= cfg_.negative_samples; ++d) {
          std::size_t target = word;
          int label = 1;
          if (d > 0) {
            target = sample_noise(rng);
            if (target == word || target == 0) continue;
            label = 0;
          }
          float* out = &syn1neg_[target * dim_];
          double f = 0.0;
          for (std::size_t k = 0; k < dim_; ++k) f += neu1[k] * Access::load(out[k]);
          const double g = gradient(f, label, alpha);
          for (std::size_t k = 0; k < dim_; ++k) neu1e[k] += g * Access::load(out[k]);
          for (std::size_t k = 0; k < dim_; ++k) Access::add(out[k], static_cast<float>(g * neu1[k]));
        }
        for (const ContextEntry& c : context) {
          float* v = &syn0_[words[c.position] * dim_];
          for (std::size_t k = 0; k < dim_; ++k) {
            Access::add(v[k], static_cast<float>(c.weight * neu1e[k]));
          }
        }
      } else {
        for (const ContextEntry& c : context) {
          float* in = &syn0_[words[c.position] * dim_];
          std::fill(neu1e.begin(), neu1e.end(), 0.0);
          for (int d = 0; d <= cfg_.negative_samples; ++d) {
            std::size_t target = word;
            int label = 1;
            if (d > 0) {
              target = sample_noise(rng);
              if (target == word || target == 0) continue;
              label = 0;
            }
            float* out = &syn1neg_[target * dim_];
            double f = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) {
              f += static_cast<double>(Access::load(in[k])) * Access::load(out[k]);
            }
            const double g = gradient(f, label, alpha) * c.weight;
            for (std::size_t k = 0; k < dim_; ++k) neu1e[k] += g * Access::load(out[k]);
            for (std::size_t k = 0; k < dim_; ++k) {
              Access::add(out[k], static_cast<float>(g * Access::load(in[k])));
            }
          }
          for (std::size_t k = 0; k < dim_; ++k) Access::add(in[k], static_cast<float>(neu1e[k]));
        }
      }
    }
  }

  const TrainingConfig& cfg_;
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::vector<float> syn0_;
  std::vector<float> syn1neg_;
  const TrainOptions& options_;
  std::size_t dim_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> noise_cdf_;
  double noise_total_ = 0.0;
  std::vector<EncodedSentence> sentences_;
  std::size_t total_words_ = 0;
};

void random_init(std::span<float> out, std::size_t dim, Lcg& rng) {
  for (float& x : out) {
    x = static_cast<float>((static_cast<double>(rng.next() & 0xFFFF) / 65536.0 - 0.5) /
                           static_cast<double>(dim));
  }
}

bool all_finite(const std::vector<float>& v) {
  return std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); });
}

EmbeddingModel finish(std::vector<std::string> tokens, std::vector<std::uint64_t> counts,
                      std::vector<float> syn0, std::vector<float> syn1neg, std::size_t dim) {
  if (!all_finite(syn0)) {
    throw Error(ErrorCode::kConfig, "training diverged (non-finite weights); lower the learning rate");
  }
  EmbeddingModel model(std::move(tokens), std::move(syn0), dim);
  model.set_counts(std::move(counts));
  model.set_output_weights(std::move(syn1neg));
  model.normalize();
  return model;
}

}  // namespace

EmbeddingModel train(const std::vector<TokenSentence>& corpus, const TrainingConfig& cfg,
                     const TrainOptions& options) {
  cfg.validate();
  Vocabulary vocab = build_vocab(corpus, cfg);
  const std::size_t dim = static_cast<std::size_t>(cfg.dimension);
  std::vector<float> syn0(vocab.tokens.size() * dim);
  Lcg init_rng(cfg.seed);
  random_init(syn0, dim, init_rng);
  std::vector<float> syn1neg(vocab.tokens.size() * dim, 0.0f);

  Trainer trainer(cfg, vocab.tokens, vocab.counts, std::move(syn0), std::move(syn1neg), options);
  trainer.encode(corpus);
  trainer.run();
  return finish(std::move(vocab.tokens), std::move(vocab.counts), trainer.take_syn0(),
                trainer.take_syn1neg(), dim);
}

EmbeddingModel train_incremental(const EmbeddingModel& model,
                                 const std::vector<TokenSentence>& new_corpus,
                                 const TrainingConfig& cfg, const TrainOptions& options) {
  cfg.validate();
  const std::size_t dim = model.dim();
  if (static_cast<std::size_t>(cfg.dimension) != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model has d=" + std::to_string(dim) + " but config asks for d=" +
                    std::to_string(cfg.dimension));
  }

  std::vector<std::string> tokens = model.vocab();
  std::vector<std::uint64_t> counts = model.counts();
  std::vector<float> syn0 = model.data();
  std::vector<float> syn1neg = model.output_weights();
  if (syn1neg.size() != syn0.size()) syn1neg.assign(syn0.size(), 0.0f);

  std::unordered_map<std::string, std::uint64_t> fresh;
  bool any_token = false;
  for (const TokenSentence& s : new_corpus) {
    for (const std::string& t : s.tokens) {
      any_token = true;
      if (auto idx = model.find(t)) {
        ++counts[*idx];
      } else {
        ++fresh[t];
      }
    }
  }
  if (!any_token) {
    EmbeddingModel copy = model;
    copy.normalize();
    return copy;
  }

  std::vector<std::pair<std::string, std::uint64_t>> added(fresh.begin(), fresh.end());
  added.erase(std::remove_if(added.begin(), added.end(),
                             [&](const auto& e) {
                               return e.second < static_cast<std::uint64_t>(cfg.min_count);
                             }),
              added.end());
  std::sort(added.begin(), added.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Lcg init_rng(cfg.seed ^ 0x5bd1e995ULL);
  for (auto& [token, count] : added) {
    tokens.push_back(std::move(token));
    counts.push_back(count);
    const std::size_t old = syn0.size();
    syn0.resize(old + dim);
    random_init(std::span<float>(syn0.data() + old, dim), dim, init_rng);
    syn1neg.resize(syn0.size(), 0.0f);
  }

  Trainer trainer(cfg, tokens, counts, std::move(syn0), std::move(syn1neg), options);
  trainer.encode(new_corpus);
  trainer.run();
  return finish(std::move(tokens), std::move(counts), trainer.take_syn0(),
                trainer.take_syn1neg(), dim);
}

}  // namespace cogdb
