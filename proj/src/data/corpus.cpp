// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/data/corpus.hpp"

#include <fstream>

#include "../common/binary_io.hpp"
#include "slam/error.hpp"

namespace slam::data {

namespace {
constexpr std::string_view kMagic = "SLAMUNIT";
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kMaxVocab = 65536;  // ids are stored as u16
}  // namespace

std::string to_string(Modality m) {
  switch (m) {
    case Modality::kSpeech: return "speech";
    case Modality::kText: return "text";
    case Modality::kInterleaved: return "interleaved";
  }
  return "unknown";
}

std::size_t UnitCorpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.size();
  return n;
}

void UnitCorpus::validate() const {
  for (std::size_t i = 0; i < documents.size(); ++i) {
    if (documents[i].empty()) throw InputError("document " + std::to_string(i) + " is empty");
    for (Token t : documents[i]) {
      if (t >= vocab_size) {
        throw InputError("document " + std::to_string(i) + ": token " + std::to_string(t) +
                         " >= vocab_size " + std::to_string(vocab_size));
      }
    }
  }
}

void write_corpus(std::ostream& out, const UnitCorpus& corpus) {
  if (corpus.vocab_size > kMaxVocab) {
    throw InputError("corpus vocab_size exceeds the 16-bit id range");
  }
  corpus.validate();
  out.write(kMagic.data(), kMagic.size());
  io::write_le<std::uint32_t>(out, kVersion);
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(corpus.vocab_size));
  io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(corpus.modality));
  io::write_string(out, corpus.metadata);
  io::write_le<std::uint64_t>(out, corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(doc.size()));
    for (Token t : doc) io::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(t));
  }
  if (!out) throw Error("failed to write corpus");
}

UnitCorpus read_corpus(std::istream& in) {
  io::expect_magic(in, kMagic);
  const auto version = io::read_le<std::uint32_t>(in, "corpus version");
  if (version != kVersion) {
    throw FormatError("unsupported corpus version " + std::to_string(version));
  }
  UnitCorpus corpus;
  corpus.vocab_size = io::read_le<std::uint32_t>(in, "vocab_size");
  if (corpus.vocab_size == 0 || corpus.vocab_size > kMaxVocab) {
    throw FormatError("corpus header: vocab_size out of range");
  }
  const auto modality = io::read_le<std::uint8_t>(in, "modality");
  if (modality > 2) throw FormatError("corpus header: unknown modality tag");
  corpus.modality = static_cast<Modality>(modality);
  corpus.metadata = io::read_string(in, "metadata");
  const auto n_docs = io::read_le<std::uint64_t>(in, "document count");
  for (std::uint64_t i = 0; i < n_docs; ++i) {
    const auto len = io::read_le<std::uint32_t>(in, "document length");
    if (len == 0) throw FormatError("document " + std::to_string(i) + " is empty");
    TokenSeq doc(len);
    for (auto& t : doc) {
      t = io::read_le<std::uint16_t>(in, "token");
      if (t >= corpus.vocab_size) {
        throw FormatError("document " + std::to_string(i) + ": token " + std::to_string(t) +
                          " >= vocab_size " + std::to_string(corpus.vocab_size));
      }
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void save_corpus(const UnitCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_corpus(out, corpus);
}

UnitCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus '" + path.string() + "'");
  return read_corpus(in);
}

}  // namespace slam::data
