// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "slam/tokens.hpp"

namespace slam::data {

enum class Modality : std::uint8_t { kSpeech = 0, kText = 1, kInterleaved = 2 };

std::string to_string(Modality m);

// Documents of discrete unit ids, 0-based and below vocab_size.
struct UnitCorpus {
  std::vector<TokenSeq> documents;
  std::size_t vocab_size = 0;
  Modality modality = Modality::kSpeech;
  std::string metadata;

  std::size_t total_tokens() const;
  // Throws InputError naming the first offending document.
  void validate() const;

  bool operator==(const UnitCorpus&) const = default;
};

// Binary corpus container (little-endian):
//   "SLAMUNIT", u32 version (1), u32 vocab_size, u8 modality,
//   u32 metadata length + bytes, u64 document count,
//   then per document: u32 length, length x u16 token ids.
void write_corpus(std::ostream& out, const UnitCorpus& corpus);
UnitCorpus read_corpus(std::istream& in);
void save_corpus(const UnitCorpus& corpus, const std::filesystem::path& path);
UnitCorpus load_corpus(const std::filesystem::path& path);

}  // namespace slam::data
