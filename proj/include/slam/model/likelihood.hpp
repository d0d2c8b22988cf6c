// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "slam/model/checkpoint.hpp"
#include "slam/model/transformer.hpp"
#include "slam/tokens.hpp"

namespace slam::model {

// Mean negative log-likelihood in nats/token over positions where mask is
// set. Throws InputError when every position is masked.
double nll_loss(const Logits& logits, const TokenMatrix& targets,
                const TokenMask& mask);

struct LossAndGrad {
  double loss = 0.0;
  Logits dlogits;
};

// nll_loss together with its gradient with respect to the logits.
LossAndGrad nll_loss_with_grad(const Logits& logits, const TokenMatrix& targets,
                               const TokenMask& mask);

// log softmax(logits)[target], computed with a max-shifted log-sum-exp.
double token_log_prob(std::span<const double> logits, Token target);

// Adds weight * d log softmax(logits)[target] / d logits into `dlogits`.
void accumulate_log_prob_grad(std::span<const double> logits, Token target,
                              double weight, std::span<double> dlogits);

struct SequenceScore {
  double total = 0.0;          // summed log-probability, nats
  std::size_t n_scored = 0;    // number of tokens scored

  double per_token() const { return total / static_cast<double>(n_scored); }
};

// Log-probability of `continuation` given `prompt`. Prompt tokens are never
// scored. With an empty prompt the first continuation token has no context
// and is not scored either, which makes the result the full-sequence
// likelihood of the continuation.
SequenceScore sequence_log_likelihood(const Checkpoint& ckpt,
                                      std::span<const Token> prompt,
                                      std::span<const Token> continuation);

// Same quantity from precomputed logits of the concatenated sequence at
// batch row `row`.
SequenceScore score_continuation(const Logits& logits, std::size_t row,
                                 std::span<const Token> sequence,
                                 std::size_t prompt_length);

}  // namespace slam::model
