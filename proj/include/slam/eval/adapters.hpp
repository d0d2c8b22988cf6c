// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slam/tokens.hpp"

namespace slam::eval {

using WordSeq = std::vector<std::string>;

// Speech tokens to words (stands in for an ASR system).
class TranscriberAdapter {
 public:
  virtual ~TranscriberAdapter() = default;
  virtual std::string name() const = 0;
  virtual WordSeq transcribe(std::span<const Token> tokens) const = 0;
};

// Words to perplexity (stands in for a text LLM).
class ScorerAdapter {
 public:
  virtual ~ScorerAdapter() = default;
  virtual std::string name() const = 0;
  virtual double perplexity(const WordSeq& words) const = 0;
};

// Quality judgement of a continuation given its prompt. No implementation
// ships; the slot keeps reports and CLI wiring uniform.
class JudgeAdapter {
 public:
  virtual ~JudgeAdapter() = default;
  virtual std::string name() const = 0;
  virtual double judge(const WordSeq& prompt, const WordSeq& continuation) const = 0;
};

// Token t becomes the word "u<t>".
class IdentityTranscriber final : public TranscriberAdapter {
 public:
  std::string name() const override { return "identity"; }
  WordSeq transcribe(std::span<const Token> tokens) const override;
};

// Every word has probability 1/W, so the perplexity is W.
class UniformUnigramScorer final : public ScorerAdapter {
 public:
  explicit UniformUnigramScorer(std::size_t vocabulary);
  std::string name() const override { return "uniform:" + std::to_string(vocabulary_); }
  double perplexity(const WordSeq& words) const override;

 private:
  std::size_t vocabulary_;
};

// Fixed conditional table P(word | previous); the first word and unseen
// bigrams fall back to `floor`.
class BigramTableScorer final : public ScorerAdapter {
 public:
  BigramTableScorer(std::map<std::pair<std::string, std::string>, double> table, double floor);
  std::string name() const override { return "bigram"; }
  double perplexity(const WordSeq& words) const override;

 private:
  std::map<std::pair<std::string, std::string>, double> table_;
  double floor_;
};

// Builds adapters from CLI specs: "identity"; "uniform:<W>";
// "bigram:<path>" where each line of the file is `prev word prob`.
// Throws ConfigError naming the adapter on any problem.
std::unique_ptr<TranscriberAdapter> make_transcriber(const std::string& spec);
std::unique_ptr<ScorerAdapter> make_scorer(const std::string& spec);

}  // namespace slam::eval
