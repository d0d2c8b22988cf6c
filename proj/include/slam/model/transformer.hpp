// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "slam/model/checkpoint.hpp"
#include "slam/tokens.hpp"

namespace slam::model {

// [batch x time x vocab] logits.
struct Logits {
  std::size_t batch = 0;
  std::size_t time = 0;
  std::size_t vocab = 0;
  std::vector<double> values;

  Logits() = default;
  Logits(std::size_t b, std::size_t t, std::size_t v)
      : batch(b), time(t), vocab(v), values(b * t * v, 0.0) {}

  std::span<double> at(std::size_t b, std::size_t t) {
    return {values.data() + (b * time + t) * vocab, vocab};
  }
  std::span<const double> at(std::size_t b, std::size_t t) const {
    return {values.data() + (b * time + t) * vocab, vocab};
  }
};

// Fresh parameters: truncated normal (std 0.02, cut at 2 std) for matrices,
// ones for norm gains. Deterministic for a fixed seed.
Checkpoint build_model(const ModelConfig& config, std::uint64_t seed);

// Inference forward pass. Safe to call concurrently on a shared checkpoint.
Logits forward(const Checkpoint& ckpt, const TokenMatrix& batch);

// Dropout applied to the attention and feed-forward branch outputs during
// training. Only consulted when config.dropout_rate > 0.
struct DropoutContext {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
};

// Forward pass that keeps the activations needed for backpropagation.
class TrainingPass {
 public:
  TrainingPass(const Checkpoint& ckpt, const TokenMatrix& batch,
               std::optional<DropoutContext> dropout = std::nullopt);
  ~TrainingPass();
  TrainingPass(TrainingPass&&) noexcept;
  TrainingPass& operator=(TrainingPass&&) noexcept;

  const Logits& logits() const;

  // Accumulates dLoss/dParameters into `grads` (which must have the
  // parameter shapes, e.g. from zeros_like) given dLoss/dLogits.
  void backward(const Logits& dlogits, NamedArrays& grads) const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace slam::model
