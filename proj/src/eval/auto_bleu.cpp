// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/eval/auto_bleu.hpp"

#include <map>
#include <vector>

namespace slam::eval {

double auto_bleu(std::span<const Token> seq, std::size_t n) {
  if (n == 0 || seq.size() < n) return 0.0;
  std::map<std::vector<Token>, std::size_t> counts;
  const std::size_t total = seq.size() - n + 1;
  for (std::size_t i = 0; i < total; ++i) {
    ++counts[std::vector<Token>(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                seq.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  std::size_t repeated = 0;
  for (const auto& [gram, c] : counts) {
    if (c >= 2) repeated += c;
  }
  return static_cast<double>(repeated) / static_cast<double>(total);
}

}  // namespace slam::eval
