// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/data/batching.hpp"

#include <algorithm>
#include <numeric>

#include "slam/error.hpp"

namespace slam::data {

BalancedBatcher::BalancedBatcher(std::vector<std::shared_ptr<const PackedDataset>> sources,
                                 std::size_t tokens_per_batch, std::uint64_t seed)
    : sources_(std::move(sources)), seed_(seed), tie_rng_(make_rng(seed, streams::kBatching)) {
  if (sources_.empty()) throw ConfigError("batcher: at least one source is required");
  context_length_ = sources_.front() ? sources_.front()->context_length : 0;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (!sources_[i] || sources_[i]->size() == 0) {
      throw ConfigError("batcher: source " + std::to_string(i) + " is empty");
    }
    if (sources_[i]->context_length != context_length_) {
      throw ConfigError("batcher: sources have different chunk lengths");
    }
  }
  if (tokens_per_batch < context_length_) {
    throw ConfigError("batcher: tokens_per_batch " + std::to_string(tokens_per_batch) +
                      " is smaller than one chunk of " + std::to_string(context_length_));
  }
  chunks_per_batch_ = tokens_per_batch / context_length_;
  order_.resize(sources_.size());
  cursor_.assign(sources_.size(), 0);
  epochs_.assign(sources_.size(), 0);
  tokens_.assign(sources_.size(), 0);
  for (std::size_t i = 0; i < sources_.size(); ++i) reshuffle(i);
}

void BalancedBatcher::reshuffle(std::size_t s) {
  auto& order = order_[s];
  order.resize(sources_[s]->size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed_ ^ (0x100000001B3ull * (s + 1)), streams::kBatching + epochs_[s] + 1);
  std::shuffle(order.begin(), order.end(), rng);
  cursor_[s] = 0;
}

Batch BalancedBatcher::next() {
  Batch batch;
  batch.chunks = TokenMatrix(chunks_per_batch_, context_length_);
  std::vector<std::size_t> priority(sources_.size());
  std::iota(priority.begin(), priority.end(), std::size_t{0});
  std::shuffle(priority.begin(), priority.end(), tie_rng_);
  for (std::size_t slot = 0; slot < chunks_per_batch_; ++slot) {
    std::size_t best = priority.front();
    for (std::size_t s : priority) {
      if (tokens_[s] < tokens_[best]) best = s;
    }
    if (cursor_[best] == order_[best].size()) {
      ++epochs_[best];
      reshuffle(best);
    }
    const std::size_t chunk = order_[best][cursor_[best]++];
    const auto src = sources_[best]->chunks.row(chunk);
    std::copy(src.begin(), src.end(), batch.chunks.row(slot).begin());
    batch.valid_lengths.push_back(sources_[best]->valid_lengths[chunk]);
    batch.source_index.push_back(best);
    tokens_[best] += context_length_;
  }
  return batch;
}

}  // namespace slam::data
