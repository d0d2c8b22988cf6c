// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/data/interleave.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "../common/text.hpp"
#include "slam/error.hpp"

namespace slam::data {

void AlignedPair::validate() const {
  if (alignment.empty()) throw InputError("aligned pair: empty alignment");
  std::size_t sp = 0, tx = 0;
  for (std::size_t i = 0; i < alignment.size(); ++i) {
    const auto& u = alignment[i];
    if (u.speech_begin != sp || u.text_begin != tx || u.speech_end < u.speech_begin ||
        u.text_end < u.text_begin) {
      throw InputError("aligned pair: unit " + std::to_string(i) +
                       " breaks sorted contiguous coverage");
    }
    sp = u.speech_end;
    tx = u.text_end;
  }
  if (sp != speech_tokens.size() || tx != text_tokens.size()) {
    throw InputError("aligned pair: alignment does not cover both sequences");
  }
}

void InterleaveConfig::validate() const {
  if (!(span_length_mean > 0.0)) throw ConfigError("interleave: span length mean must be positive");
  if (!(speech_fraction >= 0.0 && speech_fraction <= 1.0)) {
    throw ConfigError("interleave: speech_fraction must lie in [0, 1]");
  }
  if (begin_speech == begin_text) throw ConfigError("interleave: modality markers must differ");
}

SpanLengthSampler::SpanLengthSampler(double mean) : dist_(mean) {
  if (!(mean > 0.0)) throw ConfigError("span length mean must be positive");
}

std::size_t SpanLengthSampler::draw(Rng& rng) {
  while (true) {
    const long v = dist_(rng);
    if (v > 0) return static_cast<std::size_t>(v);
  }
}

double InterleavedDocument::speech_share() const {
  const std::size_t total = speech_tokens + text_tokens;
  return total == 0 ? 0.0 : static_cast<double>(speech_tokens) / static_cast<double>(total);
}

namespace {

// Maximal runs of unselected units.
std::vector<UnitRange> free_gaps(const std::vector<bool>& selected) {
  std::vector<UnitRange> gaps;
  std::size_t i = 0;
  while (i < selected.size()) {
    if (selected[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < selected.size() && !selected[j]) ++j;
    gaps.push_back({i, j});
    i = j;
  }
  return gaps;
}

// Uniform choice among start positions where a span of `length` fits in a
// gap. Returns false when no gap is long enough.
bool choose_start(const std::vector<UnitRange>& gaps, std::size_t length, Rng& rng,
                  std::size_t& start) {
  std::size_t count = 0;
  for (const auto& g : gaps) count += g.size() >= length ? g.size() - length + 1 : 0;
  if (count == 0) return false;
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  std::size_t idx = pick(rng);
  for (const auto& g : gaps) {
    const std::size_t n = g.size() >= length ? g.size() - length + 1 : 0;
    if (idx < n) {
      start = g.begin + idx;
      return true;
    }
    idx -= n;
  }
  return false;
}

bool reached(std::size_t speech, std::size_t text, double fraction) {
  const std::size_t total = speech + text;
  if (total == 0) return false;
  return static_cast<double>(speech) >= fraction * static_cast<double>(total);
}

}  // namespace

InterleavedDocument build_interleaved_detailed(const AlignedPair& pair,
                                               const InterleaveConfig& cfg,
                                               std::uint64_t document_index) {
  cfg.validate();
  pair.validate();
  const auto& units = pair.alignment;
  const std::size_t n = units.size();

  InterleavedDocument doc;
  doc.unit_is_speech.assign(n, false);
  std::size_t speech = 0;
  std::size_t text = pair.text_tokens.size();

  if (cfg.speech_fraction >= 1.0) {
    doc.unit_is_speech.assign(n, true);
    doc.speech_spans.push_back({0, n});
  } else if (cfg.speech_fraction > 0.0) {
    Rng rng = make_rng(cfg.seed ^ (document_index * 0x9E3779B97F4A7C15ull), streams::kInterleave);
    SpanLengthSampler sampler(cfg.span_length_mean);
    bool done = reached(speech, text, cfg.speech_fraction);
    while (!done) {
      const auto gaps = free_gaps(doc.unit_is_speech);
      if (gaps.empty()) break;
      std::size_t length = sampler.draw(rng);
      std::size_t start = 0;
      if (!choose_start(gaps, length, rng, start)) {
        // No gap fits the draw: cut it to the longest gap and place it there.
        length = 0;
        for (const auto& g : gaps) length = std::max(length, g.size());
        choose_start(gaps, length, rng, start);
      }
      UnitRange span{start, start};
      for (std::size_t u = start; u < start + length; ++u) {
        doc.unit_is_speech[u] = true;
        speech += units[u].speech_end - units[u].speech_begin;
        text -= units[u].text_end - units[u].text_begin;
        span.end = u + 1;
        if (reached(speech, text, cfg.speech_fraction)) {
          done = true;
          break;
        }
      }
      doc.speech_spans.push_back(span);
    }
    std::sort(doc.speech_spans.begin(), doc.speech_spans.end(),
              [](const UnitRange& a, const UnitRange& b) { return a.begin < b.begin; });
  }

  // Emit left to right; a marker opens every modality region.
  bool have_region = false;
  bool region_is_speech = false;
  for (std::size_t u = 0; u < n; ++u) {
    const bool is_speech = doc.unit_is_speech[u];
    if (!have_region || is_speech != region_is_speech) {
      doc.tokens.push_back(is_speech ? cfg.begin_speech : cfg.begin_text);
      ++doc.markers;
      ++doc.modality_switches;
      have_region = true;
      region_is_speech = is_speech;
    }
    const auto& au = units[u];
    if (is_speech) {
      doc.tokens.insert(doc.tokens.end(), pair.speech_tokens.begin() + au.speech_begin,
                        pair.speech_tokens.begin() + au.speech_end);
      doc.speech_tokens += au.speech_end - au.speech_begin;
    } else {
      doc.tokens.insert(doc.tokens.end(), pair.text_tokens.begin() + au.text_begin,
                        pair.text_tokens.begin() + au.text_end);
      doc.text_tokens += au.text_end - au.text_begin;
    }
  }
  return doc;
}

TokenSeq build_interleaved(const AlignedPair& pair, const InterleaveConfig& cfg,
                           std::uint64_t document_index) {
  return build_interleaved_detailed(pair, cfg, document_index).tokens;
}

std::vector<std::vector<AlignmentUnit>> load_alignments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open alignment file '" + path.string() + "'");
  std::vector<std::vector<AlignmentUnit>> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = text::trim(line);
    if (!view.empty() && view.front() == '#') continue;
    std::vector<AlignmentUnit> units;
    if (!view.empty()) {
      for (auto part : text::split(view, ',')) {
        TokenSeq nums;
        if (!text::parse_token_list(text::trim(part), nums) || nums.size() != 4) {
          throw FormatError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'speech_begin speech_end text_begin text_end'");
        }
        units.push_back({nums[0], nums[1], nums[2], nums[3]});
      }
    }
    docs.push_back(std::move(units));
  }
  return docs;
}

void save_alignments(const std::vector<std::vector<AlignmentUnit>>& docs,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  for (const auto& units : docs) {
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (i) out << ", ";
      out << units[i].speech_begin << ' ' << units[i].speech_end << ' ' << units[i].text_begin
          << ' ' << units[i].text_end;
    }
    out << '\n';
  }
}

std::vector<AlignedPair> make_aligned_pairs(const UnitCorpus& speech, const UnitCorpus& text_corpus,
                                            const std::vector<std::vector<AlignmentUnit>>& align) {
  if (speech.documents.size() != text_corpus.documents.size() ||
      speech.documents.size() != align.size()) {
    throw InputError("aligned pairs: speech, text and alignment document counts differ");
  }
  std::vector<AlignedPair> pairs;
  pairs.reserve(align.size());
  for (std::size_t i = 0; i < align.size(); ++i) {
    AlignedPair p{speech.documents[i], text_corpus.documents[i], align[i]};
    p.validate();
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace slam::data
