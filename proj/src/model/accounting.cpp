// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/model/accounting.hpp"

namespace slam::model {

std::uint64_t block_param_count(const ModelConfig& c) {
  const std::uint64_t d = c.model_dim;
  const std::uint64_t f = c.ffn_dim;
  // two norm gains, four attention projections, two feed-forward matrices
  return 2 * d + 4 * d * d + 2 * d * f;
}

std::uint64_t param_count(const ModelConfig& c) {
  const std::uint64_t d = c.model_dim;
  const std::uint64_t v = c.vocab_size;
  const std::uint64_t embeddings = c.tie_embeddings ? v * d : 2 * v * d;
  return embeddings + c.n_layers * block_param_count(c) + d;
}

double flops_estimate(std::uint64_t n_params, std::uint64_t n_tokens) {
  return 6.0 * static_cast<double>(n_params) * static_cast<double>(n_tokens);
}

}  // namespace slam::model
