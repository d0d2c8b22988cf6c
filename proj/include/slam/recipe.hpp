// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "slam/dpo/dpo.hpp"
#include "slam/eval/pairs.hpp"
#include "slam/model/config.hpp"
#include "slam/model/sampling.hpp"
#include "slam/train/recipe.hpp"

namespace slam {

// Keyed recipe file:
//
//   # comment
//   [model]      n_units, text_vocab, model_dim, n_layers, n_heads, ffn_dim,
//                context_length, rope_theta, dropout, tie_embeddings,
//                base_model, twist_init
//   [train]      learning_rate, warmup_ratio, scheduler, min_lr, weight_decay,
//                adam_beta1, adam_beta2, adam_eps, per_device_batch_size,
//                gradient_accumulation, max_grad_norm, total_steps,
//                context_length, dtype, train_hours, validation_interval,
//                checkpoint_interval
//   [dpo]        beta, epochs, auto_bleu_threshold, plus the optimizer keys
//                of [train]
//   [sampling]   temperature, top_k, max_new_tokens, repetition_penalty,
//                end_token
//   [eval]       normalization (total | per_token), scoring (suffix | full),
//                transcriber, scorer (adapter specs)
//   [interleave] span_length_mean, speech_fraction
//
// Unknown sections or keys are configuration errors. Sections that are absent
// keep their defaults and are marked as such.
struct EvalSettings {
  eval::Normalization normalization = eval::Normalization::kTotal;
  eval::ScoringMode scoring = eval::ScoringMode::kSuffix;
  std::string transcriber = "identity";
  std::string scorer = "uniform:500";
};

struct RecipeFile {
  std::optional<model::ModelConfig> model;
  // Unit ids occupy [0, n_units), text ids [n_units, n_units + text_vocab).
  std::size_t n_units = 0;
  std::size_t text_vocab = 0;
  std::string base_model;
  bool twist_init = false;

  bool has_train = false;
  train::TrainRecipe train;
  std::optional<double> train_hours;

  bool has_dpo = false;
  dpo::DPOConfig dpo;
  std::optional<double> dpo_hours;
  double auto_bleu_threshold = 0.3;

  bool has_sampling = false;
  model::SamplingConfig sampling;

  bool has_eval = false;
  EvalSettings eval;

  bool has_interleave = false;
  double span_length_mean = 10.0;
  double speech_fraction = 0.3;
};

RecipeFile parse_recipe(std::istream& in, const std::string& source_name = "recipe");
RecipeFile load_recipe(const std::filesystem::path& path);

// Canonical text form; parse_recipe(write_recipe(r)) reproduces r.
void write_recipe(std::ostream& out, const RecipeFile& recipe);

}  // namespace slam
