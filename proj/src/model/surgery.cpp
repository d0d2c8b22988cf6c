// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/model/surgery.hpp"

#include <cmath>
#include <random>

#include "slam/error.hpp"
#include "slam/random.hpp"

namespace slam::model {

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(var / static_cast<double>(v.size()));
  return m;
}

// Mean over rows of a [rows x dim] matrix.
std::vector<double> row_mean(const Array& a) {
  const std::size_t rows = a.shape[0];
  const std::size_t dim = a.shape[1];
  std::vector<double> mean(dim, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < dim; ++i) mean[i] += a.values[r * dim + i];
  }
  for (auto& m : mean) m /= static_cast<double>(rows);
  return mean;
}

}  // namespace

Checkpoint resize_vocabulary(const Checkpoint& source, std::size_t new_vocab,
                             const std::map<SpecialRole, Token>& new_special_tokens,
                             EmbeddingInit policy, std::uint64_t seed) {
  const ModelConfig& sc = source.config;
  if (sc.tie_embeddings && source.parameters.count("lm_head")) {
    throw FormatError("tied-embedding source carries a separate lm_head");
  }
  if (!sc.tie_embeddings) {
    auto it = source.parameters.find("lm_head");
    if (it == source.parameters.end() ||
        it->second.shape != std::vector<std::size_t>{sc.model_dim, sc.vocab_size}) {
      throw FormatError("untied source has a missing or inconsistent lm_head");
    }
  }
  validate_checkpoint(source);

  ModelConfig cfg = sc;
  cfg.vocab_size = new_vocab;
  cfg.special_tokens = new_special_tokens;
  cfg.validate();

  Checkpoint out;
  out.config = cfg;
  out.provenance = source.provenance.empty()
                       ? std::string("vocabulary resize")
                       : source.provenance + "; vocabulary resize";
  for (const auto& [name, arr] : source.parameters) {
    if (name != "tok_embedding" && name != "lm_head") out.parameters.emplace(name, arr);
  }

  const std::size_t d = sc.model_dim;
  const Array& src_emb = source.parameters.at("tok_embedding");
  Rng rng = make_rng(seed, streams::kInit);

  // New embedding rows, [new_vocab x d].
  Array emb({new_vocab, d});
  // New head, [d x new_vocab] when untied.
  Array head({d, new_vocab});

  switch (policy) {
    case EmbeddingInit::kZeros:
      break;
    case EmbeddingInit::kNormalMatchedStd: {
      std::normal_distribution<double> emb_dist(0.0, moments(src_emb.values).std);
      for (auto& v : emb.values) v = emb_dist(rng);
      if (!sc.tie_embeddings) {
        std::normal_distribution<double> head_dist(
            0.0, moments(source.parameters.at("lm_head").values).std);
        for (auto& v : head.values) v = head_dist(rng);
      }
      break;
    }
    case EmbeddingInit::kMeanEmbedding: {
      const auto mean = row_mean(src_emb);
      for (std::size_t r = 0; r < new_vocab; ++r) {
        std::copy(mean.begin(), mean.end(), emb.values.begin() + r * d);
      }
      if (!sc.tie_embeddings) {
        // Column mean of the [d x V] head, replicated into every new column.
        const Array& src_head = source.parameters.at("lm_head");
        for (std::size_t i = 0; i < d; ++i) {
          double m = 0.0;
          for (std::size_t v = 0; v < sc.vocab_size; ++v) m += src_head.values[i * sc.vocab_size + v];
          m /= static_cast<double>(sc.vocab_size);
          for (std::size_t v = 0; v < new_vocab; ++v) head.values[i * new_vocab + v] = m;
        }
      }
      break;
    }
  }
  out.parameters.emplace("tok_embedding", std::move(emb));
  if (!cfg.tie_embeddings) out.parameters.emplace("lm_head", std::move(head));
  validate_checkpoint(out);
  return out;
}

}  // namespace slam::model
