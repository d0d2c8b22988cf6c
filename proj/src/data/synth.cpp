// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/data/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slam/error.hpp"

namespace slam::data {

namespace {

std::size_t int_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > (std::size_t{1} << 24) / std::max<std::size_t>(base, 1)) {
      throw ConfigError("markov source: vocab^order is too large");
    }
    r *= base;
  }
  return r;
}

}  // namespace

MarkovSource::MarkovSource(const GeneratorSpec& spec) : spec_(spec) {
  if (spec.vocab_size == 0) throw ConfigError("generator: vocab_size must be positive");
  if (spec.kind != GeneratorSpec::Kind::kMarkov) return;
  if (spec.branching == 0 || spec.branching > spec.vocab_size) {
    throw ConfigError("generator: branching must lie in [1, vocab_size]");
  }
  const std::size_t contexts = int_pow(spec.vocab_size, spec.order);
  Rng rng = make_rng(spec.seed, streams::kSynth);
  std::vector<Token> ids(spec.vocab_size);
  std::iota(ids.begin(), ids.end(), Token{0});
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  successors_.resize(contexts * spec.branching);
  probabilities_.resize(contexts * spec.branching);
  for (std::size_t c = 0; c < contexts; ++c) {
    std::shuffle(ids.begin(), ids.end(), rng);
    double total = 0.0;
    for (std::size_t b = 0; b < spec.branching; ++b) {
      successors_[c * spec.branching + b] = ids[b];
      probabilities_[c * spec.branching + b] = weight(rng);
      total += probabilities_[c * spec.branching + b];
    }
    for (std::size_t b = 0; b < spec.branching; ++b) probabilities_[c * spec.branching + b] /= total;
  }
}

std::size_t MarkovSource::context_index(std::span<const Token> history) const {
  std::size_t idx = 0;
  for (std::size_t i = history.size() - spec_.order; i < history.size(); ++i) {
    idx = idx * spec_.vocab_size + history[i];
  }
  return idx;
}

double MarkovSource::log_prob(std::span<const Token> history, Token next) const {
  if (next >= spec_.vocab_size) return -INFINITY;
  switch (spec_.kind) {
    case GeneratorSpec::Kind::kUniform:
      return -std::log(static_cast<double>(spec_.vocab_size));
    case GeneratorSpec::Kind::kCycle:
      if (history.empty()) return next == 0 ? 0.0 : -INFINITY;
      return next == (history.back() + 1) % spec_.vocab_size ? 0.0 : -INFINITY;
    case GeneratorSpec::Kind::kMarkov:
      break;
  }
  if (history.size() < spec_.order) return -std::log(static_cast<double>(spec_.vocab_size));
  const std::size_t c = context_index(history);
  for (std::size_t b = 0; b < spec_.branching; ++b) {
    if (successors_[c * spec_.branching + b] == next) {
      return std::log(probabilities_[c * spec_.branching + b]);
    }
  }
  return -INFINITY;
}

Token MarkovSource::draw_next(std::span<const Token> history, Rng& rng) const {
  std::uniform_int_distribution<Token> uniform(0, static_cast<Token>(spec_.vocab_size - 1));
  switch (spec_.kind) {
    case GeneratorSpec::Kind::kUniform:
      return uniform(rng);
    case GeneratorSpec::Kind::kCycle:
      return history.empty() ? 0 : static_cast<Token>((history.back() + 1) % spec_.vocab_size);
    case GeneratorSpec::Kind::kMarkov:
      break;
  }
  if (history.size() < spec_.order) return uniform(rng);
  const std::size_t c = context_index(history);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double r = u01(rng);
  for (std::size_t b = 0; b < spec_.branching; ++b) {
    r -= probabilities_[c * spec_.branching + b];
    if (r < 0.0) return successors_[c * spec_.branching + b];
  }
  return successors_[c * spec_.branching + spec_.branching - 1];
}

TokenSeq MarkovSource::sample(std::size_t length, Rng& rng) const {
  return continue_from({}, length, rng);
}

TokenSeq MarkovSource::continue_from(std::span<const Token> history, std::size_t length,
                                     Rng& rng) const {
  TokenSeq seq(history.begin(), history.end());
  for (std::size_t i = 0; i < length; ++i) seq.push_back(draw_next(seq, rng));
  return TokenSeq(seq.begin() + static_cast<std::ptrdiff_t>(history.size()), seq.end());
}

UnitCorpus synth_toy_corpus(const GeneratorSpec& spec, std::size_t n_documents,
                            const LengthSpec& lengths) {
  if (lengths.min_length == 0 || lengths.max_length < lengths.min_length) {
    throw ConfigError("synth: length range must satisfy 1 <= min <= max");
  }
  const MarkovSource source(spec);
  Rng rng = make_rng(spec.seed, streams::kSynth + 1);
  std::uniform_int_distribution<std::size_t> length(lengths.min_length, lengths.max_length);
  UnitCorpus corpus;
  corpus.vocab_size = spec.vocab_size;
  corpus.modality = Modality::kSpeech;
  switch (spec.kind) {
    case GeneratorSpec::Kind::kUniform: corpus.metadata = "synthetic uniform"; break;
    case GeneratorSpec::Kind::kCycle: corpus.metadata = "synthetic cycle"; break;
    case GeneratorSpec::Kind::kMarkov:
      corpus.metadata = "synthetic markov order=" + std::to_string(spec.order) +
                        " branching=" + std::to_string(spec.branching);
      break;
  }
  corpus.metadata += " seed=" + std::to_string(spec.seed);
  for (std::size_t i = 0; i < n_documents; ++i) {
    corpus.documents.push_back(source.sample(length(rng), rng));
  }
  return corpus;
}

}  // namespace slam::data
