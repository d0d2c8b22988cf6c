// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/eval/adapters.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "../common/text.hpp"
#include "slam/error.hpp"

namespace slam::eval {

WordSeq IdentityTranscriber::transcribe(std::span<const Token> tokens) const {
  WordSeq words;
  words.reserve(tokens.size());
  for (Token t : tokens) words.push_back("u" + std::to_string(t));
  return words;
}

UniformUnigramScorer::UniformUnigramScorer(std::size_t vocabulary) : vocabulary_(vocabulary) {
  if (vocabulary == 0) throw ConfigError("uniform scorer: vocabulary must be positive");
}

double UniformUnigramScorer::perplexity(const WordSeq& words) const {
  if (words.empty()) throw InputError("uniform scorer: empty transcript");
  const double lp = -std::log(static_cast<double>(vocabulary_));
  double total = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) total += lp;
  return std::exp(-total / static_cast<double>(words.size()));
}

BigramTableScorer::BigramTableScorer(std::map<std::pair<std::string, std::string>, double> table,
                                     double floor)
    : table_(std::move(table)), floor_(floor) {
  if (!(floor > 0.0 && floor <= 1.0)) throw ConfigError("bigram scorer: floor must lie in (0, 1]");
  for (const auto& [key, p] : table_) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw ConfigError("bigram scorer: probability of '" + key.first + " " + key.second +
                        "' must lie in (0, 1]");
    }
  }
}

double BigramTableScorer::perplexity(const WordSeq& words) const {
  if (words.empty()) throw InputError("bigram scorer: empty transcript");
  double total = std::log(floor_);
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto it = table_.find({words[i - 1], words[i]});
    total += std::log(it == table_.end() ? floor_ : it->second);
  }
  return std::exp(-total / static_cast<double>(words.size()));
}

namespace {

std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace

std::unique_ptr<TranscriberAdapter> make_transcriber(const std::string& spec) {
  const auto [kind, arg] = split_spec(spec);
  if (kind == "identity" && arg.empty()) return std::make_unique<IdentityTranscriber>();
  throw ConfigError("transcriber adapter '" + spec + "' is not available (known: identity)");
}

std::unique_ptr<ScorerAdapter> make_scorer(const std::string& spec) {
  const auto [kind, arg] = split_spec(spec);
  if (kind == "uniform") {
    std::size_t w = 0;
    if (!text::parse_number(arg, w) || w == 0) {
      throw ConfigError("scorer adapter '" + spec + "': expected uniform:<vocabulary>");
    }
    return std::make_unique<UniformUnigramScorer>(w);
  }
  if (kind == "bigram") {
    std::ifstream in(arg);
    if (!in) throw ConfigError("scorer adapter '" + spec + "': cannot open '" + arg + "'");
    std::map<std::pair<std::string, std::string>, double> table;
    double floor = 1e-6;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto view = text::trim(line);
      if (view.empty() || view.front() == '#') continue;
      std::istringstream ls{std::string(view)};
      std::string a, b, p;
      ls >> a >> b >> p;
      double prob = 0.0;
      std::string extra;
      if (a == "floor" && !b.empty() && p.empty() && text::parse_number(b, prob)) {
        floor = prob;
        continue;
      }
      if (p.empty() || (ls >> extra) || !text::parse_number(p, prob)) {
        throw ConfigError("scorer adapter '" + spec + "': line " + std::to_string(line_no) +
                          ": expected 'previous word probability'");
      }
      table[{a, b}] = prob;
    }
    try {
      return std::make_unique<BigramTableScorer>(std::move(table), floor);
    } catch (const ConfigError& e) {
      throw ConfigError("scorer adapter '" + spec + "': " + e.what());
    }
  }
  throw ConfigError("scorer adapter '" + spec +
                    "' is not available (known: uniform:<W>, bigram:<path>)");
}

}  // namespace slam::eval
