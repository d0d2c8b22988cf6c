// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>

#include "slam/data/batching.hpp"

namespace slam::testing {

// Serves `rows_per_batch` consecutive chunks per call, cycling through a
// fixed pool. Every chunk is reported as fully valid.
class FixedStream final : public data::BatchStream {
 public:
  FixedStream(TokenMatrix pool, std::size_t rows_per_batch)
      : pool_(std::move(pool)), rows_(rows_per_batch) {}

  data::Batch next() override {
    data::Batch b;
    b.chunks = TokenMatrix(rows_, pool_.cols);
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto src = pool_.row(cursor_);
      std::copy(src.begin(), src.end(), b.chunks.row(r).begin());
      b.valid_lengths.push_back(static_cast<std::uint32_t>(pool_.cols));
      b.source_index.push_back(0);
      cursor_ = (cursor_ + 1) % pool_.rows;
    }
    return b;
  }

 private:
  TokenMatrix pool_;
  std::size_t rows_;
  std::size_t cursor_ = 0;
};

}  // namespace slam::testing
