// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace slam::cli {

namespace fs = std::filesystem;

enum class Stage { kPack, kSynth, kImport, kInit, kInterleave, kPretrain, kDpo, kEval, kGenerate, kSweep };

std::string to_string(Stage s);

// Everything a command reads or writes. Hyperparameters live in the recipe
// file; the manifest only carries paths, the seed and budget overrides.
struct RunManifest {
  Stage stage = Stage::kPretrain;
  fs::path recipe;
  std::vector<fs::path> data;         // packed datasets or corpora, per source
  fs::path validation;                // packed dataset
  fs::path checkpoint;                // init / base / evaluated checkpoint
  fs::path reference;                 // DPO reference checkpoint
  fs::path preferences;
  std::vector<fs::path> pairs;
  fs::path prompts;                   // corpus file, one prompt per document
  fs::path alignments;
  fs::path out;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_steps;
  std::optional<double> wall_hours;
  std::optional<double> max_flops;
  std::size_t threads = 1;

  // Throws ConfigError naming the first missing input path, then creates
  // the output directory.
  void prepare() const;
  void write(std::ostream& out, bool deterministic) const;
};

// SLAM_DETERMINISTIC set to anything but "0" or "": no timestamps or
// timings in outputs and a single worker thread.
bool deterministic_mode();

struct PackArgs {
  std::size_t context_length = 0;
  bool separators = true;
};
void cmd_pack(const RunManifest& m, const PackArgs& args);

struct SynthArgs {
  std::string kind = "markov";
  std::size_t vocab = 16;
  std::size_t order = 1;
  std::size_t branching = 3;
  std::size_t documents = 100;
  std::size_t min_length = 32;
  std::size_t max_length = 32;
  std::size_t preference_records = 0;
  std::size_t prompt_length = 8;
  std::size_t continuation_length = 8;
};
void cmd_synth(const RunManifest& m, const SynthArgs& args);

// Text lines of space-separated ids, one document per non-empty line.
struct ImportArgs {
  std::size_t vocab = 0;
  std::string modality = "speech";
};
void cmd_import(const RunManifest& m, const ImportArgs& args);

void cmd_init(const RunManifest& m);
void cmd_interleave(const RunManifest& m);
void cmd_train(const RunManifest& m);
void cmd_dpo(const RunManifest& m);
void cmd_eval(const RunManifest& m);
void cmd_generate(const RunManifest& m);
void cmd_dpo_sweep(const RunManifest& m, const std::vector<double>& fractions,
                   std::uint64_t budget_steps);

struct FlopsArgs {
  std::optional<std::uint64_t> params;
  double tokens = 0.0;
};
void cmd_flops(const RunManifest& m, const FlopsArgs& args, std::ostream& out);

}  // namespace slam::cli
