// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/train/recipe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slam/error.hpp"

namespace slam::train {

std::string to_string(Scheduler s) {
  return s == Scheduler::kInverseSqrt ? "inverse_sqrt" : "cosine_with_min";
}

Scheduler scheduler_from_string(const std::string& s) {
  if (s == "inverse_sqrt") return Scheduler::kInverseSqrt;
  if (s == "cosine_with_min" || s == "cosine") return Scheduler::kCosineWithMin;
  throw ConfigError("unknown scheduler '" + s + "' (expected inverse_sqrt or cosine_with_min)");
}

void TrainRecipe::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("train recipe: ") + what);
  };
  require(std::isfinite(peak_lr) && peak_lr > 0.0, "peak_lr must be positive");
  require(std::isfinite(min_lr) && min_lr > 0.0 && min_lr <= peak_lr,
          "min_lr must satisfy 0 < min_lr <= peak_lr");
  require(warmup_ratio >= 0.0 && warmup_ratio < 1.0, "warmup_ratio must lie in [0, 1)");
  require(weight_decay >= 0.0, "weight_decay must be non-negative");
  require(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam_beta1 must lie in [0, 1)");
  require(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam_beta2 must lie in [0, 1)");
  require(adam_eps > 0.0, "adam_eps must be positive");
  require(per_device_batch >= 1, "per_device_batch must be at least 1");
  require(grad_accum_steps >= 1, "grad_accum_steps must be at least 1");
  require(std::isfinite(max_grad_norm) && max_grad_norm > 0.0, "max_grad_norm must be positive");
  require(total_steps >= 1, "total_steps must be at least 1");
  require(context_length >= 2, "context_length must be at least 2");
}

std::size_t TrainRecipe::warmup_steps() const {
  return static_cast<std::size_t>(std::llround(warmup_ratio * static_cast<double>(total_steps)));
}

double lr_at(std::size_t step, const TrainRecipe& r) {
  if (step > r.total_steps) {
    throw InputError("lr_at: step " + std::to_string(step) + " exceeds total_steps " +
                     std::to_string(r.total_steps));
  }
  const std::size_t w = r.warmup_steps();
  if (step < w) return r.peak_lr * static_cast<double>(step) / static_cast<double>(w);
  if (r.scheduler == Scheduler::kInverseSqrt) {
    const std::size_t anchor = std::max<std::size_t>(w, 1);
    if (step <= anchor) return r.peak_lr;
    return r.peak_lr * std::sqrt(static_cast<double>(anchor) / static_cast<double>(step));
  }
  if (step == w) return r.peak_lr;
  const double progress =
      static_cast<double>(step - w) / static_cast<double>(r.total_steps - w);
  return r.min_lr +
         (r.peak_lr - r.min_lr) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

std::pair<double, double> split_budget(double total_seconds, double dpo_fraction) {
  if (!(dpo_fraction >= 0.0 && dpo_fraction <= 1.0)) {
    throw ConfigError("split_budget: fraction must lie in [0, 1]");
  }
  if (!(total_seconds >= 0.0)) throw ConfigError("split_budget: total must be non-negative");
  const double dpo = total_seconds * dpo_fraction;
  return {total_seconds - dpo, dpo};
}

}  // namespace slam::train
