// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "slam/tokens.hpp"

namespace slam::eval {

// Fraction of n-gram occurrences in `seq` whose n-gram also occurs at another
// position of the same sequence. 0 when the sequence has fewer than n tokens.
double auto_bleu(std::span<const Token> seq, std::size_t n = 2);

}  // namespace slam::eval
