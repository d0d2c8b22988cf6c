// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/data/preference.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "../common/text.hpp"
#include "slam/error.hpp"
#include "slam/eval/auto_bleu.hpp"

namespace slam::data {

void PreferenceRecord::validate(std::optional<std::size_t> context_length) const {
  if (prompt.empty()) throw InputError("preference record: empty prompt");
  if (chosen.empty()) throw InputError("preference record: empty chosen continuation");
  if (rejected.empty()) throw InputError("preference record: empty rejected continuation");
  if (context_length) {
    const std::size_t longest = prompt.size() + std::max(chosen.size(), rejected.size());
    if (longest > *context_length) {
      throw InputError("preference record: " + std::to_string(longest) +
                       " tokens exceed the context length " + std::to_string(*context_length));
    }
  }
}

void write_preferences(std::ostream& out, const std::vector<PreferenceRecord>& records) {
  for (const auto& r : records) {
    out << text::join_tokens(r.prompt) << " | " << text::join_tokens(r.chosen) << " | "
        << text::join_tokens(r.rejected) << '\n';
  }
}

std::vector<PreferenceRecord> read_preferences(std::istream& in) {
  std::vector<PreferenceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = text::split(view, '|');
    const auto where = "preferences line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) throw FormatError(where + "expected 'prompt | chosen | rejected'");
    PreferenceRecord r;
    TokenSeq* targets[3] = {&r.prompt, &r.chosen, &r.rejected};
    const char* names[3] = {"prompt", "chosen", "rejected"};
    for (int i = 0; i < 3; ++i) {
      if (!text::parse_token_list(text::trim(fields[static_cast<std::size_t>(i)]), *targets[i])) {
        throw FormatError(where + "malformed token id in " + names[i]);
      }
      if (targets[i]->empty()) throw FormatError(where + "empty " + names[i]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void save_preferences(const std::vector<PreferenceRecord>& records,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_preferences(out, records);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::vector<PreferenceRecord> load_preferences(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open preference file '" + path.string() + "'");
  return read_preferences(in);
}

std::vector<PreferenceRecord> filter_by_auto_bleu(const std::vector<PreferenceRecord>& records,
                                                  double threshold) {
  std::vector<PreferenceRecord> kept;
  for (const auto& r : records) {
    if (eval::auto_bleu(r.chosen) <= threshold && eval::auto_bleu(r.rejected) <= threshold) {
      kept.push_back(r);
    }
  }
  return kept;
}

std::vector<PreferenceRecord> make_preference_pairs(const UnitCorpus& prompt_corpus,
                                                    const PreferenceRules& rules,
                                                    std::uint64_t seed) {
  if (rules.prompt_length == 0 || rules.continuation_length == 0) {
    throw ConfigError("preference pairs: prompt and continuation lengths must be positive");
  }
  if (rules.positive == PreferenceRules::Positive::kSourceContinuation && !rules.source) {
    throw ConfigError("preference pairs: source continuation requires a source");
  }
  const bool need_suffix = rules.positive == PreferenceRules::Positive::kDocumentSuffix ||
                           rules.negative == PreferenceRules::Negative::kOtherDocumentSuffix;
  const std::size_t need = rules.prompt_length + (need_suffix ? rules.continuation_length : 0);
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < prompt_corpus.documents.size(); ++i) {
    if (prompt_corpus.documents[i].size() >= need) usable.push_back(i);
  }
  if (rules.negative == PreferenceRules::Negative::kOtherDocumentSuffix && usable.size() < 2) {
    throw ConfigError("preference pairs: other-document negatives need two usable documents");
  }

  Rng rng = make_rng(seed, streams::kPreference);
  const auto suffix = [&](std::size_t doc) {
    const auto& d = prompt_corpus.documents[doc];
    return TokenSeq(d.begin() + static_cast<std::ptrdiff_t>(rules.prompt_length),
                    d.begin() + static_cast<std::ptrdiff_t>(rules.prompt_length +
                                                            rules.continuation_length));
  };
  std::vector<PreferenceRecord> out;
  for (std::size_t k = 0; k < usable.size(); ++k) {
    const auto& doc = prompt_corpus.documents[usable[k]];
    PreferenceRecord r;
    r.prompt.assign(doc.begin(), doc.begin() + static_cast<std::ptrdiff_t>(rules.prompt_length));
    if (rules.positive == PreferenceRules::Positive::kDocumentSuffix) {
      r.chosen = suffix(usable[k]);
    } else {
      r.chosen = rules.source->continue_from(r.prompt, rules.continuation_length, rng);
    }
    switch (rules.negative) {
      case PreferenceRules::Negative::kShuffledPositive:
        r.rejected = r.chosen;
        std::shuffle(r.rejected.begin(), r.rejected.end(), rng);
        break;
      case PreferenceRules::Negative::kOtherDocumentSuffix: {
        std::uniform_int_distribution<std::size_t> pick(0, usable.size() - 2);
        std::size_t other = pick(rng);
        if (other >= k) ++other;
        r.rejected = suffix(usable[other]);
        break;
      }
      case PreferenceRules::Negative::kUniformRandom: {
        std::uniform_int_distribution<Token> unit(
            0, static_cast<Token>(std::max<std::size_t>(prompt_corpus.vocab_size, 1) - 1));
        r.rejected.resize(rules.continuation_length);
        for (auto& t : r.rejected) t = unit(rng);
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace slam::data
