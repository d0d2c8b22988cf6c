// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slam/model/checkpoint.hpp"
#include "slam/tokens.hpp"

namespace slam::eval {

struct LikelihoodPair {
  TokenSeq positive;
  TokenSeq negative;
  std::optional<TokenSeq> shared_prompt;
  std::string tag;  // benchmark label, e.g. sblimp, ssc, tsc

  // Throws InputError.
  void validate(std::optional<std::size_t> context_length = std::nullopt) const;
  bool operator==(const LikelihoodPair&) const = default;
};

enum class Normalization { kTotal, kPerToken };
// kSuffix scores each member conditioned on the prompt; kFull scores the
// concatenation prompt + member from its second token on.
enum class ScoringMode { kSuffix, kFull };

std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);
std::string to_string(ScoringMode m);
ScoringMode scoring_mode_from_string(const std::string& s);

struct PairScore {
  double positive = 0.0;
  double negative = 0.0;
};

PairScore score_pair(const model::Checkpoint& ckpt, const LikelihoodPair& pair,
                     Normalization norm = Normalization::kTotal,
                     ScoringMode mode = ScoringMode::kSuffix);

// Fraction of pairs with positive > negative; ties count 0.5.
double accuracy_from_scores(const std::vector<PairScore>& scores);

struct AccuracyCount {
  std::size_t pairs = 0;
  std::size_t half_wins = 0;  // 2 per win, 1 per tie

  double accuracy() const {
    return pairs == 0 ? 0.0 : static_cast<double>(half_wins) / (2.0 * static_cast<double>(pairs));
  }
};

struct PairwiseResult {
  AccuracyCount overall;
  std::map<std::string, AccuracyCount> per_tag;

  double accuracy() const { return overall.accuracy(); }
};

// Scores pairs on `threads` workers over the shared read-only checkpoint.
// Counts are integers, so the result does not depend on the thread count.
PairwiseResult pairwise_accuracy(const model::Checkpoint& ckpt,
                                 const std::vector<LikelihoodPair>& pairs,
                                 Normalization norm = Normalization::kTotal,
                                 ScoringMode mode = ScoringMode::kSuffix,
                                 std::size_t threads = 1);

// Pair file: one pair per line, `tag|prompt|positive|negative`, token ids
// space separated; the prompt field may be empty. '#' starts a comment line.
void write_pairs(std::ostream& out, const std::vector<LikelihoodPair>& pairs);
std::vector<LikelihoodPair> read_pairs(std::istream& in);
void save_pairs(const std::vector<LikelihoodPair>& pairs, const std::filesystem::path& path);
std::vector<LikelihoodPair> load_pairs(const std::filesystem::path& path);

}  // namespace slam::eval
