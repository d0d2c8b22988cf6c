// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "slam/tokens.hpp"

namespace slam::model {

// Roles a vocabulary entry can play besides being a speech unit.
enum class SpecialRole { kPad, kSeparator, kBeginSpeech, kBeginText };

std::string to_string(SpecialRole role);
SpecialRole special_role_from_string(const std::string& name);

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t model_dim = 0;
  std::size_t n_layers = 0;
  std::size_t n_heads = 0;
  std::size_t ffn_dim = 0;
  std::size_t context_length = 0;
  double rope_theta = 10000.0;
  double dropout_rate = 0.0;
  bool tie_embeddings = false;
  std::map<SpecialRole, Token> special_tokens;

  std::size_t head_dim() const { return n_heads == 0 ? 0 : model_dim / n_heads; }

  // Throws ConfigError naming the first violated invariant.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

// Convenience: a config for `n_units` speech units followed by the four
// special tokens (pad, separator, begin-of-speech, begin-of-text).
ModelConfig unit_lm_config(std::size_t n_units, std::size_t model_dim,
                           std::size_t n_layers, std::size_t n_heads,
                           std::size_t ffn_dim, std::size_t context_length);

}  // namespace slam::model
