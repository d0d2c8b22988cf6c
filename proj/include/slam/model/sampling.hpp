// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slam/model/checkpoint.hpp"
#include "slam/random.hpp"
#include "slam/tokens.hpp"

namespace slam::model {

struct SamplingConfig {
  double temperature = 0.8;
  std::size_t top_k = 25;
  std::size_t max_new_tokens = 150;
  double repetition_penalty = 1.1;
  std::uint64_t seed = 0;
  std::optional<Token> end_token;

  void validate() const;
  bool operator==(const SamplingConfig&) const = default;
};

// CTRL-style penalty on every token id present in `history`: positive logits
// are divided by `penalty`, non-positive ones multiplied by it. Each id is
// penalized once no matter how often it occurs.
void apply_repetition_penalty(std::span<double> logits,
                              std::span<const Token> history, double penalty);

// Ids of the k largest logits, ordered by decreasing logit; equal logits are
// ordered by increasing id, so ties at the cutoff keep the lowest id.
std::vector<Token> top_k_indices(std::span<const double> logits, std::size_t k);

// One decoding step on raw next-token logits: penalty, temperature, top-k,
// then a draw from the renormalized distribution.
Token sample_next(std::vector<double> logits, std::span<const Token> history,
                  const SamplingConfig& cfg, Rng& rng);

// Autoregressive continuation of `prompt`. Returns only the new tokens.
// When prompt + generated exceeds the context, the most recent
// context_length tokens are used as the window.
TokenSeq generate(const Checkpoint& ckpt, std::span<const Token> prompt,
                  const SamplingConfig& cfg);

}  // namespace slam::model
