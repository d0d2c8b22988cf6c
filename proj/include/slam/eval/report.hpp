// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slam/eval/pairs.hpp"

namespace slam::eval {

struct BenchmarkResult {
  double accuracy = 0.0;
  std::size_t pairs = 0;
  bool operator==(const BenchmarkResult&) const = default;
};

struct MetricReport {
  std::map<std::string, BenchmarkResult> benchmarks;
  std::optional<double> mean_auto_bleu;
  std::optional<double> generative_perplexity;
  std::size_t generated = 0;  // continuations produced
  std::size_t excluded = 0;   // continuations dropped after an adapter failure
  std::map<std::string, std::string> config;
  std::vector<std::string> warnings;

  void add_pairwise(const std::string& name, const PairwiseResult& result);

  // Flat key -> value view used by both serializations, keys sorted.
  std::map<std::string, std::string> flatten() const;
  // `key = value` lines.
  void write_keyed(std::ostream& out) const;
  void write_csv_header(std::ostream& out) const;
  void write_csv_row(std::ostream& out) const;

  // Checks every value lies in range and counts agree; throws InputError.
  void validate() const;
};

// Perplexities are only comparable at similar diversity: returns a warning
// when the mean auto-BLEU of two reports differs by more than 0.5 points
// (0.005 on the [0, 1] scale).
std::optional<std::string> grounding_warning(const MetricReport& a, const MetricReport& b,
                                             double tolerance = 0.005);

}  // namespace slam::eval
