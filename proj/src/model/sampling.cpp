// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/model/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "slam/error.hpp"
#include "slam/model/transformer.hpp"

namespace slam::model {

void SamplingConfig::validate() const {
  if (!(temperature > 0.0)) throw ConfigError("sampling: temperature must be positive");
  if (top_k < 1) throw ConfigError("sampling: top_k must be at least 1");
  if (!(repetition_penalty >= 1.0)) throw ConfigError("sampling: repetition_penalty must be >= 1");
}

void apply_repetition_penalty(std::span<double> logits, std::span<const Token> history,
                              double penalty) {
  if (penalty == 1.0) return;
  const std::set<Token> seen(history.begin(), history.end());
  for (Token t : seen) {
    if (t >= logits.size()) continue;
    double& l = logits[t];
    l = l > 0.0 ? l / penalty : l * penalty;
  }
}

std::vector<Token> top_k_indices(std::span<const double> logits, std::size_t k) {
  std::vector<Token> ids(logits.size());
  std::iota(ids.begin(), ids.end(), Token{0});
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](Token a, Token b) {
                      if (logits[a] != logits[b]) return logits[a] > logits[b];
                      return a < b;
                    });
  ids.resize(k);
  return ids;
}

Token sample_next(std::vector<double> logits, std::span<const Token> history,
                  const SamplingConfig& cfg, Rng& rng) {
  apply_repetition_penalty(logits, history, cfg.repetition_penalty);
  for (auto& l : logits) l /= cfg.temperature;
  const auto candidates = top_k_indices(logits, cfg.top_k);
  if (candidates.size() == 1) return candidates.front();
  const double mx = logits[candidates.front()];
  std::vector<double> weights(candidates.size());
  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    weights[i] = std::exp(logits[candidates[i]] - mx);
    total += weights[i];
  }
  std::uniform_real_distribution<double> uni(0.0, total);
  double r = uni(rng);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (r < weights[i]) return candidates[i];
    r -= weights[i];
  }
  return candidates.back();
}

TokenSeq generate(const Checkpoint& ckpt, std::span<const Token> prompt,
                  const SamplingConfig& cfg) {
  cfg.validate();
  if (prompt.empty()) throw InputError("generate: empty prompt");
  if (prompt.size() > ckpt.config.context_length) {
    throw InputError("generate: prompt longer than the context length");
  }
  Rng rng = make_rng(cfg.seed, streams::kSampling);
  TokenSeq history(prompt.begin(), prompt.end());
  TokenSeq generated;
  const std::size_t ctx = ckpt.config.context_length;
  for (std::size_t step = 0; step < cfg.max_new_tokens; ++step) {
    const std::size_t start = history.size() > ctx ? history.size() - ctx : 0;
    TokenMatrix window(1, history.size() - start);
    std::copy(history.begin() + static_cast<std::ptrdiff_t>(start), history.end(),
              window.data.begin());
    const Logits logits = forward(ckpt, window);
    const auto last = logits.at(0, window.cols - 1);
    const Token next =
        sample_next(std::vector<double>(last.begin(), last.end()), history, cfg, rng);
    history.push_back(next);
    generated.push_back(next);
    if (cfg.end_token && next == *cfg.end_token) break;
  }
  return generated;
}

}  // namespace slam::model
