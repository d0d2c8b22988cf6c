// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "slam/data/corpus.hpp"
#include "slam/data/synth.hpp"
#include "slam/tokens.hpp"

namespace slam::data {

struct PreferenceRecord {
  TokenSeq prompt;
  TokenSeq chosen;
  TokenSeq rejected;

  // Non-empty members; with a context length, both prompt+continuation
  // sequences must fit. Throws InputError.
  void validate(std::optional<std::size_t> context_length = std::nullopt) const;
  bool operator==(const PreferenceRecord&) const = default;
};

// One record per line: "prompt|chosen|rejected", space-separated ids.
// Blank lines and lines starting with '#' are skipped.
void write_preferences(std::ostream& out, const std::vector<PreferenceRecord>& records);
std::vector<PreferenceRecord> read_preferences(std::istream& in);
void save_preferences(const std::vector<PreferenceRecord>& records,
                      const std::filesystem::path& path);
std::vector<PreferenceRecord> load_preferences(const std::filesystem::path& path);

// Keeps records whose chosen and rejected continuations both have bigram
// auto-BLEU <= threshold.
std::vector<PreferenceRecord> filter_by_auto_bleu(const std::vector<PreferenceRecord>& records,
                                                  double threshold);

struct PreferenceRules {
  enum class Positive {
    kDocumentSuffix,       // the document's own continuation after the prompt
    kSourceContinuation,   // a fresh continuation from `source`
  };
  enum class Negative {
    kShuffledPositive,     // the chosen continuation, randomly permuted
    kOtherDocumentSuffix,  // the continuation of a different document
    kUniformRandom,        // i.i.d. uniform units
  };
  std::size_t prompt_length = 8;
  std::size_t continuation_length = 8;
  Positive positive = Positive::kDocumentSuffix;
  Negative negative = Negative::kShuffledPositive;
  const MarkovSource* source = nullptr;  // required for kSourceContinuation
};

// One record per prompt document long enough for the rules. Deterministic
// for a fixed seed.
std::vector<PreferenceRecord> make_preference_pairs(const UnitCorpus& prompt_corpus,
                                                    const PreferenceRules& rules,
                                                    std::uint64_t seed);

}  // namespace slam::data
