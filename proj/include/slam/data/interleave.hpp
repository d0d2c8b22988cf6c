// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "slam/data/corpus.hpp"
#include "slam/random.hpp"
#include "slam/tokens.hpp"

namespace slam::data {

// One aligned unit (typically a word): half-open index ranges into the
// speech and the text token sequences.
struct AlignmentUnit {
  std::size_t speech_begin = 0;
  std::size_t speech_end = 0;
  std::size_t text_begin = 0;
  std::size_t text_end = 0;

  bool operator==(const AlignmentUnit&) const = default;
};

struct AlignedPair {
  TokenSeq speech_tokens;
  TokenSeq text_tokens;
  std::vector<AlignmentUnit> alignment;

  // Sorted, contiguous, in-range cover of both sequences. Throws InputError.
  void validate() const;
};

struct InterleaveConfig {
  double span_length_mean = 10.0;  // Poisson rate, in alignment units
  double speech_fraction = 0.3;    // target share of speech tokens
  Token begin_speech = 0;
  Token begin_text = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Zero-truncated Poisson: zero draws are redrawn.
class SpanLengthSampler {
 public:
  explicit SpanLengthSampler(double mean);
  std::size_t draw(Rng& rng);

 private:
  std::poisson_distribution<long> dist_;
};

struct UnitRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

struct InterleavedDocument {
  TokenSeq tokens;
  std::vector<UnitRange> speech_spans;  // selected spans, in unit indices, sorted
  std::vector<bool> unit_is_speech;
  std::size_t speech_tokens = 0;        // content tokens rendered from speech
  std::size_t text_tokens = 0;          // content tokens rendered from text
  std::size_t markers = 0;
  std::size_t modality_switches = 0;    // regions, counting the first one

  double speech_share() const;
};

// Span lengths are Poisson draws; each span is placed uniformly among the
// start positions where it fits in still-unselected units, until the speech
// share of content tokens first reaches speech_fraction (the last span is cut
// short to stop there). The document is then emitted in order, with a
// modality marker before every region. `document_index` decorrelates the
// random stream across documents sharing one seed.
InterleavedDocument build_interleaved_detailed(const AlignedPair& pair,
                                               const InterleaveConfig& cfg,
                                               std::uint64_t document_index = 0);

TokenSeq build_interleaved(const AlignedPair& pair, const InterleaveConfig& cfg,
                           std::uint64_t document_index = 0);

// Alignment file: one line per document, units separated by ',' and each
// unit written as "speech_begin speech_end text_begin text_end".
std::vector<std::vector<AlignmentUnit>> load_alignments(const std::filesystem::path& path);
void save_alignments(const std::vector<std::vector<AlignmentUnit>>& docs,
                     const std::filesystem::path& path);

// Zips a speech corpus, a text corpus and their alignments into pairs.
std::vector<AlignedPair> make_aligned_pairs(const UnitCorpus& speech, const UnitCorpus& text,
                                            const std::vector<std::vector<AlignmentUnit>>& align);

}  // namespace slam::data
