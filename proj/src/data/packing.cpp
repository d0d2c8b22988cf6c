// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/data/packing.hpp"

#include <algorithm>
#include <fstream>

#include "../common/binary_io.hpp"
#include "slam/error.hpp"

namespace slam::data {

namespace {
constexpr std::string_view kMagic = "SLAMPACK";
constexpr std::uint32_t kVersion = 1;
}  // namespace

PackedDataset pack(const UnitCorpus& corpus, const PackOptions& opts) {
  if (opts.context_length < 2) {
    throw ConfigError("pack: context_length must be at least 2, got " +
                      std::to_string(opts.context_length));
  }
  if (opts.model_vocab_size == 0 || opts.model_vocab_size > 65536) {
    throw ConfigError("pack: model_vocab_size must lie in [1, 65536]");
  }
  if (opts.sep_token >= opts.model_vocab_size || opts.pad_token >= opts.model_vocab_size) {
    throw ConfigError("pack: separator and pad ids must lie inside the model vocabulary");
  }
  if (corpus.vocab_size > opts.model_vocab_size) {
    throw ConfigError("pack: corpus vocabulary is larger than the model vocabulary");
  }
  corpus.validate();
  if (opts.insert_separator) {
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      const auto& d = corpus.documents[i];
      if (std::find(d.begin(), d.end(), opts.sep_token) != d.end()) {
        throw InputError("pack: document " + std::to_string(i) + " contains the separator id");
      }
    }
  }

  PackedDataset out;
  out.context_length = opts.context_length;
  out.sep_token = opts.sep_token;
  out.pad_token = opts.pad_token;
  out.separators = opts.insert_separator;
  out.chunks.cols = opts.context_length;

  TokenSeq current;
  current.reserve(opts.context_length);
  auto flush = [&](bool final) {
    const auto valid = static_cast<std::uint32_t>(current.size());
    if (final && valid == 0) return;
    current.resize(opts.context_length, opts.pad_token);
    out.chunks.data.insert(out.chunks.data.end(), current.begin(), current.end());
    out.valid_lengths.push_back(valid);
    out.source_labels.push_back(corpus.modality);
    ++out.chunks.rows;
    current.clear();
  };
  auto push = [&](Token t) {
    current.push_back(t);
    if (current.size() == opts.context_length) flush(false);
  };
  for (const auto& doc : corpus.documents) {
    for (Token t : doc) push(t);
    if (opts.insert_separator) push(opts.sep_token);
  }
  flush(true);
  return out;
}

std::vector<TokenSeq> unpack(const PackedDataset& packed) {
  if (!packed.separators) throw InputError("unpack: dataset was packed without separators");
  std::vector<TokenSeq> docs;
  TokenSeq current;
  for (std::size_t r = 0; r < packed.chunks.rows; ++r) {
    const auto row = packed.chunks.row(r);
    for (std::size_t i = 0; i < packed.valid_lengths[r]; ++i) {
      if (row[i] == packed.sep_token) {
        docs.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(row[i]);
      }
    }
  }
  if (!current.empty()) docs.push_back(std::move(current));
  return docs;
}

TrainingExample make_training_example(const TokenMatrix& chunks,
                                      std::span<const std::uint32_t> valid_lengths) {
  if (chunks.cols < 2) throw InputError("training example needs chunks of at least 2 tokens");
  if (valid_lengths.size() != chunks.rows) throw InputError("valid_lengths size mismatch");
  const std::size_t t_len = chunks.cols - 1;
  TrainingExample ex{TokenMatrix(chunks.rows, t_len), TokenMatrix(chunks.rows, t_len),
                     TokenMask(chunks.rows, t_len, 0)};
  for (std::size_t r = 0; r < chunks.rows; ++r) {
    for (std::size_t t = 0; t < t_len; ++t) {
      ex.inputs.at(r, t) = chunks.at(r, t);
      ex.targets.at(r, t) = chunks.at(r, t + 1);
      ex.mask.at(r, t) = (t + 1 < valid_lengths[r]) ? 1 : 0;
    }
  }
  return ex;
}

void write_packed(std::ostream& out, const PackedDataset& p) {
  out.write(kMagic.data(), kMagic.size());
  io::write_le<std::uint32_t>(out, kVersion);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.context_length));
  io::write_le<std::uint32_t>(out, p.sep_token);
  io::write_le<std::uint32_t>(out, p.pad_token);
  io::write_le<std::uint8_t>(out, p.separators ? 1 : 0);
  io::write_le<std::uint64_t>(out, p.chunks.rows);
  for (std::size_t r = 0; r < p.chunks.rows; ++r) {
    io::write_le<std::uint32_t>(out, p.valid_lengths[r]);
    io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(p.source_labels[r]));
    for (Token t : p.chunks.row(r)) {
      if (t > 0xFFFF) throw InputError("packed token id exceeds the 16-bit range");
      io::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(t));
    }
  }
  if (!out) throw Error("failed to write packed dataset");
}

PackedDataset read_packed(std::istream& in) {
  io::expect_magic(in, kMagic);
  const auto version = io::read_le<std::uint32_t>(in, "packed version");
  if (version != kVersion) throw FormatError("unsupported packed version");
  PackedDataset p;
  p.context_length = io::read_le<std::uint32_t>(in, "context_length");
  if (p.context_length < 2) throw FormatError("packed header: context_length < 2");
  p.sep_token = io::read_le<std::uint32_t>(in, "sep");
  p.pad_token = io::read_le<std::uint32_t>(in, "pad");
  p.separators = io::read_le<std::uint8_t>(in, "separator flag") != 0;
  const auto n = io::read_le<std::uint64_t>(in, "chunk count");
  p.chunks.cols = p.context_length;
  for (std::uint64_t r = 0; r < n; ++r) {
    const auto valid = io::read_le<std::uint32_t>(in, "valid length");
    if (valid == 0 || valid > p.context_length) {
      throw FormatError("chunk " + std::to_string(r) + ": bad valid length");
    }
    const auto label = io::read_le<std::uint8_t>(in, "source label");
    if (label > 2) throw FormatError("chunk " + std::to_string(r) + ": bad source label");
    p.valid_lengths.push_back(valid);
    p.source_labels.push_back(static_cast<Modality>(label));
    for (std::size_t i = 0; i < p.context_length; ++i) {
      p.chunks.data.push_back(io::read_le<std::uint16_t>(in, "token"));
    }
    ++p.chunks.rows;
  }
  return p;
}

void save_packed(const PackedDataset& packed, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_packed(out, packed);
}

PackedDataset load_packed(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open packed dataset '" + path.string() + "'");
  return read_packed(in);
}

}  // namespace slam::data
