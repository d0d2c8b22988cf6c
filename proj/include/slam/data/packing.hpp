// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "slam/data/corpus.hpp"
#include "slam/tokens.hpp"

namespace slam::data {

struct PackOptions {
  std::size_t context_length = 0;
  Token sep_token = 0;
  Token pad_token = 0;
  // Upper bound for every id that ends up in a chunk (the model vocabulary).
  std::size_t model_vocab_size = 0;
  // Append sep_token after every document.
  bool insert_separator = true;
};

// Fixed-length chunks cut from the concatenated document stream.
struct PackedDataset {
  std::size_t context_length = 0;
  Token sep_token = 0;
  Token pad_token = 0;
  bool separators = true;
  TokenMatrix chunks;                        // [n_chunks x context_length]
  std::vector<std::uint32_t> valid_lengths;  // tokens before padding, per chunk
  std::vector<Modality> source_labels;

  std::size_t size() const { return chunks.rows; }
  bool operator==(const PackedDataset&) const = default;
};

// Documents are concatenated in order, each followed by the separator, and
// cut into consecutive chunks; the final partial chunk is padded and its
// padding excluded through valid_lengths.
PackedDataset pack(const UnitCorpus& corpus, const PackOptions& opts);

// Inverse of pack: the documents, recovered by splitting the unpadded stream
// at separators. Requires a dataset packed with separators.
std::vector<TokenSeq> unpack(const PackedDataset& packed);

// Next-token training view of whole chunks: inputs are tokens [0, C-1),
// targets tokens [1, C), masked where the target is padding.
struct TrainingExample {
  TokenMatrix inputs;
  TokenMatrix targets;
  TokenMask mask;
};

TrainingExample make_training_example(const TokenMatrix& chunks,
                                      std::span<const std::uint32_t> valid_lengths);

// Binary packed-dataset container (little-endian):
//   "SLAMPACK", u32 version (1), u32 context_length, u32 sep, u32 pad,
//   u8 separators, u64 chunk count,
//   then per chunk: u32 valid length, u8 modality, context_length x u16 ids.
void write_packed(std::ostream& out, const PackedDataset& packed);
PackedDataset read_packed(std::istream& in);
void save_packed(const PackedDataset& packed, const std::filesystem::path& path);
PackedDataset load_packed(const std::filesystem::path& path);

}  // namespace slam::data
