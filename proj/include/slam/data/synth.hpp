// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "slam/data/corpus.hpp"
#include "slam/random.hpp"
#include "slam/tokens.hpp"

namespace slam::data {

// Seeded unit source with known structure, standing in for tokenized speech.
struct GeneratorSpec {
  enum class Kind {
    kUniform,  // i.i.d. uniform units; entropy ln(vocab) per token
    kMarkov,   // order-k chain, `branching` successors per context
    kCycle,    // 0, 1, 2, ... wrapping at vocab; zero entropy
  };
  Kind kind = Kind::kMarkov;
  std::size_t vocab_size = 16;
  std::size_t order = 1;
  std::size_t branching = 3;
  std::uint64_t seed = 0;
};

struct LengthSpec {
  std::size_t min_length = 16;
  std::size_t max_length = 16;
};

class MarkovSource {
 public:
  explicit MarkovSource(const GeneratorSpec& spec);

  const GeneratorSpec& spec() const { return spec_; }

  // log P(next | history); only the last `order` tokens of history matter.
  // Histories shorter than the order are scored as uniform draws.
  double log_prob(std::span<const Token> history, Token next) const;

  TokenSeq sample(std::size_t length, Rng& rng) const;
  TokenSeq continue_from(std::span<const Token> history, std::size_t length, Rng& rng) const;

 private:
  std::size_t context_index(std::span<const Token> history) const;
  Token draw_next(std::span<const Token> history, Rng& rng) const;

  GeneratorSpec spec_;
  std::vector<Token> successors_;      // [contexts x branching]
  std::vector<double> probabilities_;  // [contexts x branching]
};

// Deterministic for a fixed spec (including its seed).
UnitCorpus synth_toy_corpus(const GeneratorSpec& spec, std::size_t n_documents,
                            const LengthSpec& lengths);

}  // namespace slam::data
