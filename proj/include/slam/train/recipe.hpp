// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

namespace slam::train {

enum class Scheduler { kInverseSqrt, kCosineWithMin };

std::string to_string(Scheduler s);
Scheduler scheduler_from_string(const std::string& s);

// Defaults reproduce the 24-hour single-GPU pretraining recipe.
struct TrainRecipe {
  double peak_lr = 1e-3;
  double warmup_ratio = 0.01;
  Scheduler scheduler = Scheduler::kCosineWithMin;
  double min_lr = 5e-5;
  double weight_decay = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t per_device_batch = 8;
  std::size_t grad_accum_steps = 16;
  double max_grad_norm = 0.5;
  std::size_t total_steps = 17625;
  std::size_t context_length = 1024;
  std::string dtype = "bfloat16";  // informational; compute is float64
  std::uint64_t seed = 0;
  std::size_t validation_interval = 0;  // steps; 0 disables periodic validation
  std::size_t checkpoint_interval = 0;  // steps; 0 disables periodic checkpoints

  // Throws ConfigError.
  void validate() const;
  std::size_t warmup_steps() const;
  std::size_t effective_batch() const { return per_device_batch * grad_accum_steps; }
  bool operator==(const TrainRecipe&) const = default;
};

// Learning rate for optimizer step `step` (1-based during training; 0 gives
// the start of warmup). Throws InputError when step > total_steps.
double lr_at(std::size_t step, const TrainRecipe& recipe);

// (pretrain, dpo) seconds; the two parts always sum to `total_seconds`.
std::pair<double, double> split_budget(double total_seconds, double dpo_fraction);

}  // namespace slam::train
