// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/model/config.hpp"

#include <set>
#include <string>

#include "slam/error.hpp"

namespace slam::model {

std::string to_string(SpecialRole role) {
  switch (role) {
    case SpecialRole::kPad: return "pad";
    case SpecialRole::kSeparator: return "separator";
    case SpecialRole::kBeginSpeech: return "begin_speech";
    case SpecialRole::kBeginText: return "begin_text";
  }
  return "unknown";
}

SpecialRole special_role_from_string(const std::string& name) {
  if (name == "pad") return SpecialRole::kPad;
  if (name == "separator") return SpecialRole::kSeparator;
  if (name == "begin_speech") return SpecialRole::kBeginSpeech;
  if (name == "begin_text") return SpecialRole::kBeginText;
  throw ConfigError("unknown special token role '" + name + "'");
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("model config: " + msg); };
  if (vocab_size == 0) fail("vocab_size must be positive");
  if (model_dim == 0) fail("model_dim must be positive");
  if (n_layers == 0) fail("n_layers must be positive");
  if (n_heads == 0) fail("n_heads must be positive");
  if (ffn_dim == 0) fail("ffn_dim must be positive");
  if (model_dim % n_heads != 0) {
    fail("model_dim " + std::to_string(model_dim) + " is not divisible by n_heads " +
         std::to_string(n_heads));
  }
  if (head_dim() % 2 != 0) fail("per-head dimension must be even for rotary embedding");
  if (context_length < 2) fail("context_length must be at least 2");
  if (!(rope_theta > 0.0)) fail("rope_theta must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate <= 1.0)) fail("dropout_rate must lie in [0, 1]");
  if (special_tokens.size() > vocab_size) fail("more special tokens than vocabulary entries");
  std::set<Token> seen;
  for (const auto& [role, id] : special_tokens) {
    if (id >= vocab_size) {
      fail("special token '" + to_string(role) + "' id " + std::to_string(id) +
           " is outside the vocabulary");
    }
    if (!seen.insert(id).second) fail("special token ids must be distinct");
  }
}

ModelConfig unit_lm_config(std::size_t n_units, std::size_t model_dim,
                           std::size_t n_layers, std::size_t n_heads,
                           std::size_t ffn_dim, std::size_t context_length) {
  ModelConfig cfg;
  cfg.vocab_size = n_units + 4;
  cfg.model_dim = model_dim;
  cfg.n_layers = n_layers;
  cfg.n_heads = n_heads;
  cfg.ffn_dim = ffn_dim;
  cfg.context_length = context_length;
  const auto base = static_cast<Token>(n_units);
  cfg.special_tokens = {{SpecialRole::kPad, base},
                        {SpecialRole::kSeparator, base + 1},
                        {SpecialRole::kBeginSpeech, base + 2},
                        {SpecialRole::kBeginText, base + 3}};
  return cfg;
}

}  // namespace slam::model
