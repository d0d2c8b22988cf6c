// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/model/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "slam/error.hpp"

namespace slam::model {

namespace {

void check_shapes(const Logits& logits, const TokenMatrix& targets, const TokenMask& mask) {
  if (targets.rows != logits.batch || targets.cols != logits.time || mask.rows != logits.batch ||
      mask.cols != logits.time) {
    throw InputError("nll_loss: logits, targets and mask shapes disagree");
  }
}

double log_sum_exp(std::span<const double> logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - mx);
  return mx + std::log(sum);
}

}  // namespace

double token_log_prob(std::span<const double> logits, Token target) {
  if (target >= logits.size()) throw InputError("target token outside the vocabulary");
  return logits[target] - log_sum_exp(logits);
}

void accumulate_log_prob_grad(std::span<const double> logits, Token target, double weight,
                              std::span<double> dlogits) {
  const double lse = log_sum_exp(logits);
  for (std::size_t v = 0; v < logits.size(); ++v) {
    dlogits[v] -= weight * std::exp(logits[v] - lse);
  }
  dlogits[target] += weight;
}

double nll_loss(const Logits& logits, const TokenMatrix& targets, const TokenMask& mask) {
  check_shapes(logits, targets, mask);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t b = 0; b < logits.batch; ++b) {
    for (std::size_t t = 0; t < logits.time; ++t) {
      if (!mask.at(b, t)) continue;
      total -= token_log_prob(logits.at(b, t), targets.at(b, t));
      ++count;
    }
  }
  if (count == 0) throw InputError("nll_loss: every position is masked; loss is undefined");
  return total / static_cast<double>(count);
}

LossAndGrad nll_loss_with_grad(const Logits& logits, const TokenMatrix& targets,
                               const TokenMask& mask) {
  check_shapes(logits, targets, mask);
  std::size_t count = 0;
  for (auto m : mask.data) count += m ? 1 : 0;
  if (count == 0) throw InputError("nll_loss: every position is masked; loss is undefined");
  const double w = 1.0 / static_cast<double>(count);
  LossAndGrad out{0.0, Logits(logits.batch, logits.time, logits.vocab)};
  for (std::size_t b = 0; b < logits.batch; ++b) {
    for (std::size_t t = 0; t < logits.time; ++t) {
      if (!mask.at(b, t)) continue;
      out.loss -= token_log_prob(logits.at(b, t), targets.at(b, t));
      accumulate_log_prob_grad(logits.at(b, t), targets.at(b, t), -w, out.dlogits.at(b, t));
    }
  }
  out.loss *= w;
  return out;
}

SequenceScore score_continuation(const Logits& logits, std::size_t row,
                                 std::span<const Token> sequence, std::size_t prompt_length) {
  SequenceScore score;
  // Token i is predicted by the logits at position i - 1.
  for (std::size_t i = std::max<std::size_t>(prompt_length, 1); i < sequence.size(); ++i) {
    score.total += token_log_prob(logits.at(row, i - 1), sequence[i]);
    ++score.n_scored;
  }
  return score;
}

SequenceScore sequence_log_likelihood(const Checkpoint& ckpt, std::span<const Token> prompt,
                                      std::span<const Token> continuation) {
  if (continuation.empty()) throw InputError("sequence_log_likelihood: empty continuation");
  const std::size_t n = prompt.size() + continuation.size();
  if (n > ckpt.config.context_length) {
    throw InputError("sequence_log_likelihood: prompt + continuation length " +
                     std::to_string(n) + " exceeds context length " +
                     std::to_string(ckpt.config.context_length));
  }
  if (prompt.empty() && continuation.size() < 2) {
    throw InputError("sequence_log_likelihood: nothing to score without a prompt");
  }
  TokenMatrix batch(1, n);
  std::copy(prompt.begin(), prompt.end(), batch.data.begin());
  std::copy(continuation.begin(), continuation.end(), batch.data.begin() + prompt.size());
  const Logits logits = forward(ckpt, batch);
  return score_continuation(logits, 0, batch.row(0), prompt.size());
}

}  // namespace slam::model
