// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/eval/pairs.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "../common/text.hpp"
#include "slam/error.hpp"
#include "slam/model/likelihood.hpp"

namespace slam::eval {

void LikelihoodPair::validate(std::optional<std::size_t> context_length) const {
  if (positive.empty() || negative.empty()) {
    throw InputError("likelihood pair '" + tag + "': empty member");
  }
  const std::size_t prompt = shared_prompt ? shared_prompt->size() : 0;
  if (prompt == 0 && (positive.size() < 2 || negative.size() < 2)) {
    throw InputError("likelihood pair '" + tag +
                     "': without a prompt each member needs at least two tokens");
  }
  if (context_length) {
    const std::size_t longest = prompt + std::max(positive.size(), negative.size());
    if (longest > *context_length) {
      throw InputError("likelihood pair '" + tag + "': " + std::to_string(longest) +
                       " tokens exceed context length " + std::to_string(*context_length));
    }
  }
}

std::string to_string(Normalization n) {
  return n == Normalization::kTotal ? "total" : "per_token";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "total") return Normalization::kTotal;
  if (s == "per_token") return Normalization::kPerToken;
  throw ConfigError("unknown normalization '" + s + "' (expected total or per_token)");
}

std::string to_string(ScoringMode m) { return m == ScoringMode::kSuffix ? "suffix" : "full"; }

ScoringMode scoring_mode_from_string(const std::string& s) {
  if (s == "suffix") return ScoringMode::kSuffix;
  if (s == "full") return ScoringMode::kFull;
  throw ConfigError("unknown scoring mode '" + s + "' (expected suffix or full)");
}

namespace {

double score_member(const model::Checkpoint& ckpt, const TokenSeq& prompt, const TokenSeq& member,
                    Normalization norm, ScoringMode mode) {
  model::SequenceScore s;
  if (mode == ScoringMode::kSuffix || prompt.empty()) {
    s = model::sequence_log_likelihood(ckpt, prompt, member);
  } else {
    TokenSeq joined = prompt;
    joined.insert(joined.end(), member.begin(), member.end());
    s = model::sequence_log_likelihood(ckpt, {}, joined);
  }
  return norm == Normalization::kTotal ? s.total : s.per_token();
}

}  // namespace

PairScore score_pair(const model::Checkpoint& ckpt, const LikelihoodPair& pair,
                     Normalization norm, ScoringMode mode) {
  pair.validate(ckpt.config.context_length);
  static const TokenSeq kNoPrompt;
  const TokenSeq& prompt = pair.shared_prompt ? *pair.shared_prompt : kNoPrompt;
  return {score_member(ckpt, prompt, pair.positive, norm, mode),
          score_member(ckpt, prompt, pair.negative, norm, mode)};
}

namespace {

std::size_t half_wins(const PairScore& s) {
  if (s.positive > s.negative) return 2;
  if (s.positive == s.negative) return 1;
  return 0;
}

}  // namespace

double accuracy_from_scores(const std::vector<PairScore>& scores) {
  AccuracyCount c;
  for (const auto& s : scores) {
    ++c.pairs;
    c.half_wins += half_wins(s);
  }
  return c.accuracy();
}

PairwiseResult pairwise_accuracy(const model::Checkpoint& ckpt,
                                 const std::vector<LikelihoodPair>& pairs, Normalization norm,
                                 ScoringMode mode, std::size_t threads) {
  for (const auto& p : pairs) p.validate(ckpt.config.context_length);
  std::vector<std::size_t> outcome(pairs.size(), 0);
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, pairs.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      outcome[i] = half_wins(score_pair(ckpt, pairs[i], norm, mode));
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < pairs.size(); i = next++) {
            outcome[i] = half_wins(score_pair(ckpt, pairs[i], norm, mode));
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  PairwiseResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    result.overall.pairs += 1;
    result.overall.half_wins += outcome[i];
    auto& tag = result.per_tag[pairs[i].tag];
    tag.pairs += 1;
    tag.half_wins += outcome[i];
  }
  return result;
}

void write_pairs(std::ostream& out, const std::vector<LikelihoodPair>& pairs) {
  for (const auto& p : pairs) {
    if (p.tag.find_first_of("|\n") != std::string::npos) {
      throw InputError("pair tag '" + p.tag + "' contains a reserved character");
    }
    out << p.tag << '|';
    if (p.shared_prompt) out << text::join_tokens(*p.shared_prompt);
    out << '|' << text::join_tokens(p.positive) << '|' << text::join_tokens(p.negative) << '\n';
  }
}

std::vector<LikelihoodPair> read_pairs(std::istream& in) {
  std::vector<LikelihoodPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw FormatError("pairs line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = text::split(view, '|');
    if (fields.size() != 4) fail("expected 'tag|prompt|positive|negative'");
    LikelihoodPair p;
    p.tag = std::string(text::trim(fields[0]));
    TokenSeq prompt;
    if (!text::parse_token_list(text::trim(fields[1]), prompt)) fail("malformed prompt tokens");
    if (!prompt.empty()) p.shared_prompt = std::move(prompt);
    if (!text::parse_token_list(text::trim(fields[2]), p.positive)) {
      fail("malformed positive tokens");
    }
    if (!text::parse_token_list(text::trim(fields[3]), p.negative)) {
      fail("malformed negative tokens");
    }
    if (p.positive.empty()) fail("empty positive");
    if (p.negative.empty()) fail("empty negative");
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void save_pairs(const std::vector<LikelihoodPair>& pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_pairs(out, pairs);
}

std::vector<LikelihoodPair> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pair file '" + path.string() + "'");
  return read_pairs(in);
}

}  // namespace slam::eval
