// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "slam/data/packing.hpp"
#include "slam/random.hpp"

namespace slam::data {

struct Batch {
  TokenMatrix chunks;                        // [n x context_length]
  std::vector<std::uint32_t> valid_lengths;
  std::vector<std::size_t> source_index;     // which source each row came from
};

// Single-consumer stream of micro-batches. Streams never end; finite data
// recycles.
class BatchStream {
 public:
  virtual ~BatchStream() = default;
  virtual Batch next() = 0;
};

// Draws chunks so that the cumulative token count per source never differs
// by more than one chunk: each slot goes to the source with the fewest tokens
// so far (ties in a seeded random order). Each source is read in a seeded
// shuffled order and reshuffled when exhausted.
class BalancedBatcher final : public BatchStream {
 public:
  BalancedBatcher(std::vector<std::shared_ptr<const PackedDataset>> sources,
                  std::size_t tokens_per_batch, std::uint64_t seed);

  Batch next() override;

  std::size_t chunks_per_batch() const { return chunks_per_batch_; }
  const std::vector<std::uint64_t>& tokens_per_source() const { return tokens_; }
  const std::vector<std::uint64_t>& epochs() const { return epochs_; }

 private:
  void reshuffle(std::size_t source);

  std::vector<std::shared_ptr<const PackedDataset>> sources_;
  std::size_t chunks_per_batch_;
  std::size_t context_length_;
  std::uint64_t seed_;
  Rng tie_rng_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::size_t> cursor_;
  std::vector<std::uint64_t> epochs_;
  std::vector<std::uint64_t> tokens_;
};

}  // namespace slam::data
