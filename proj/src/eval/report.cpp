// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/eval/report.hpp"

#include <cmath>
#include <ostream>

#include "../common/text.hpp"
#include "slam/error.hpp"

namespace slam::eval {

void MetricReport::add_pairwise(const std::string& name, const PairwiseResult& result) {
  benchmarks[name] = {result.accuracy(), result.overall.pairs};
}

std::map<std::string, std::string> MetricReport::flatten() const {
  std::map<std::string, std::string> kv;
  for (const auto& [name, b] : benchmarks) {
    kv["accuracy." + name] = text::format_double(b.accuracy);
    kv["pairs." + name] = std::to_string(b.pairs);
  }
  if (mean_auto_bleu) kv["auto_bleu"] = text::format_double(*mean_auto_bleu);
  if (generative_perplexity) kv["generative_perplexity"] = text::format_double(*generative_perplexity);
  if (generated > 0 || mean_auto_bleu) {
    kv["generated"] = std::to_string(generated);
    kv["excluded"] = std::to_string(excluded);
  }
  for (const auto& [k, v] : config) kv["config." + k] = v;
  return kv;
}

void MetricReport::write_keyed(std::ostream& out) const {
  for (const auto& [k, v] : flatten()) out << k << " = " << v << '\n';
  for (const auto& w : warnings) out << "warning = " << w << '\n';
}

namespace {

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  q.push_back('"');
  return q;
}

}  // namespace

void MetricReport::write_csv_header(std::ostream& out) const {
  bool first = true;
  for (const auto& [k, v] : flatten()) {
    out << (first ? "" : ",") << csv_field(k);
    first = false;
  }
  out << '\n';
}

void MetricReport::write_csv_row(std::ostream& out) const {
  bool first = true;
  for (const auto& [k, v] : flatten()) {
    out << (first ? "" : ",") << csv_field(v);
    first = false;
  }
  out << '\n';
}

void MetricReport::validate() const {
  for (const auto& [name, b] : benchmarks) {
    if (!(b.accuracy >= 0.0 && b.accuracy <= 1.0)) {
      throw InputError("report: accuracy of '" + name + "' outside [0, 1]");
    }
  }
  if (mean_auto_bleu && !(*mean_auto_bleu >= 0.0 && *mean_auto_bleu <= 1.0)) {
    throw InputError("report: auto-BLEU outside [0, 1]");
  }
  if (generative_perplexity && !(*generative_perplexity >= 1.0 && std::isfinite(*generative_perplexity))) {
    throw InputError("report: perplexity must be finite and at least 1");
  }
  if (excluded > generated) throw InputError("report: more excluded samples than generated");
}

std::optional<std::string> grounding_warning(const MetricReport& a, const MetricReport& b,
                                             double tolerance) {
  if (!a.mean_auto_bleu || !b.mean_auto_bleu) return std::nullopt;
  const double diff = std::abs(*a.mean_auto_bleu - *b.mean_auto_bleu);
  if (diff <= tolerance) return std::nullopt;
  return "auto-BLEU differs by " + text::format_double(diff) +
         " between reports; generative perplexities are not comparable";
}

}  // namespace slam::eval
