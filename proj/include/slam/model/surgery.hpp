// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>

#include "slam/model/checkpoint.hpp"

namespace slam::model {

enum class EmbeddingInit {
  kNormalMatchedStd,  // normal noise with the source embedding's empirical std
  kZeros,
  kMeanEmbedding,     // every row set to the source's mean embedding row
};

// Replaces the vocabulary of a (text) checkpoint: the input embedding and
// the output projection are re-created with `new_vocab` rows, everything else
// is copied bit-for-bit. Optimizer state is dropped and the step reset.
Checkpoint resize_vocabulary(const Checkpoint& source, std::size_t new_vocab,
                             const std::map<SpecialRole, Token>& new_special_tokens,
                             EmbeddingInit policy, std::uint64_t seed = 0);

}  // namespace slam::model
