// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/eval/generative.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "../common/text.hpp"
#include "slam/error.hpp"
#include "slam/eval/auto_bleu.hpp"

namespace slam::eval {

namespace {

GeneratedSample run_one(const model::Checkpoint& ckpt, const TokenSeq& prompt,
                        model::SamplingConfig cfg, std::uint64_t index,
                        const TranscriberAdapter& transcriber, const ScorerAdapter& scorer) {
  cfg.seed += index;
  GeneratedSample s;
  s.prompt = prompt;
  s.continuation = model::generate(ckpt, prompt, cfg);
  s.auto_bleu = auto_bleu(s.continuation);
  try {
    const WordSeq words = transcriber.transcribe(s.continuation);
    const double ppl = scorer.perplexity(words);
    if (!std::isfinite(ppl)) throw NumericError("non-finite perplexity");
    s.perplexity = ppl;
  } catch (const std::exception& e) {
    s.error = transcriber.name() + "/" + scorer.name() + ": " + e.what();
  }
  return s;
}

}  // namespace

GenerativeResult generative_eval(const model::Checkpoint& ckpt,
                                 const std::vector<TokenSeq>& prompts,
                                 const model::SamplingConfig& sampling,
                                 const TranscriberAdapter& transcriber,
                                 const ScorerAdapter& scorer, std::size_t threads) {
  sampling.validate();
  if (prompts.empty()) throw InputError("generative eval: no prompts");
  GenerativeResult result;
  result.samples.resize(prompts.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, prompts.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = next++; i < prompts.size(); i = next++) {
        result.samples[i] = run_one(ckpt, prompts[i], sampling, i, transcriber, scorer);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Sequential reduction in prompt order keeps the means bit-identical.
  auto& rep = result.report;
  double bleu = 0.0, ppl = 0.0;
  std::size_t kept = 0;
  for (const auto& s : result.samples) {
    ++rep.generated;
    if (s.error) {
      ++rep.excluded;
      continue;
    }
    bleu += s.auto_bleu;
    ppl += *s.perplexity;
    ++kept;
  }
  if (kept > 0) {
    rep.mean_auto_bleu = bleu / static_cast<double>(kept);
    rep.generative_perplexity = ppl / static_cast<double>(kept);
  }
  rep.config["sampling.temperature"] = text::format_double(sampling.temperature);
  rep.config["sampling.top_k"] = std::to_string(sampling.top_k);
  rep.config["sampling.max_new_tokens"] = std::to_string(sampling.max_new_tokens);
  rep.config["sampling.repetition_penalty"] = text::format_double(sampling.repetition_penalty);
  rep.config["sampling.seed"] = std::to_string(sampling.seed);
  rep.config["transcriber"] = transcriber.name();
  rep.config["scorer"] = scorer.name();
  if (rep.excluded > 0) {
    rep.warnings.push_back(std::to_string(rep.excluded) + " of " + std::to_string(rep.generated) +
                           " samples excluded after adapter failures");
  }
  return result;
}

}  // namespace slam::eval
