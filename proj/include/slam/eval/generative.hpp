// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slam/eval/adapters.hpp"
#include "slam/eval/report.hpp"
#include "slam/model/checkpoint.hpp"
#include "slam/model/sampling.hpp"

namespace slam::eval {

struct GeneratedSample {
  TokenSeq prompt;
  TokenSeq continuation;
  double auto_bleu = 0.0;
  std::optional<double> perplexity;
  std::optional<std::string> error;
};

struct GenerativeResult {
  std::vector<GeneratedSample> samples;
  MetricReport report;
};

// Prompt i is sampled with seed sampling.seed + i, so results do not depend
// on `threads`. Adapter failures are recorded per sample and excluded from
// both means.
GenerativeResult generative_eval(const model::Checkpoint& ckpt,
                                 const std::vector<TokenSeq>& prompts,
                                 const model::SamplingConfig& sampling,
                                 const TranscriberAdapter& transcriber,
                                 const ScorerAdapter& scorer, std::size_t threads = 1);

}  // namespace slam::eval
