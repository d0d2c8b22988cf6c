// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slam/data/preference.hpp"
#include "slam/model/checkpoint.hpp"
#include "slam/train/budget.hpp"
#include "slam/train/recipe.hpp"

namespace slam::dpo {

// -log sigmoid(beta * ((pc - rc) - (pr - rr))). Log-likelihoods in nats.
// Throws InputError on non-finite inputs and ConfigError when beta <= 0.
double dpo_loss(double policy_chosen, double policy_rejected, double ref_chosen,
                double ref_rejected, double beta);

struct LossGrad {
  double loss = 0.0;
  double margin = 0.0;  // beta * ((pc - rc) - (pr - rr))
  double d_policy_chosen = 0.0;
  double d_policy_rejected = 0.0;
};

LossGrad dpo_loss_grad(double policy_chosen, double policy_rejected, double ref_chosen,
                       double ref_rejected, double beta);

train::TrainRecipe default_dpo_optimizer();

struct DPOConfig {
  double beta = 0.1;
  // Optimizer, schedule and step budget; total_steps bounds training unless
  // epochs is set.
  train::TrainRecipe optim = default_dpo_optimizer();
  std::optional<double> epochs;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

struct DpoStepRecord {
  std::size_t step = 0;
  std::size_t records_seen = 0;
  double loss = 0.0;
  double margin = 0.0;           // mean implicit-reward margin
  double reward_accuracy = 0.0;  // fraction of records with margin > 0
  double lr = 0.0;
  double grad_norm = 0.0;
};

struct DpoLog {
  std::vector<DpoStepRecord> steps;
  std::string stop_reason;

  // Columns: step,records_seen,loss,margin,reward_accuracy,lr,grad_norm
  void write_csv(std::ostream& out) const;
};

struct DpoResult {
  model::Checkpoint checkpoint;
  DpoLog log;
};

// Optimizes the policy against a frozen reference. Without an explicit
// reference the input checkpoint is copied. Prompt positions carry no loss.
DpoResult dpo_train(model::Checkpoint policy, const std::vector<data::PreferenceRecord>& records,
                    const DPOConfig& cfg, train::BudgetClock& budget,
                    const model::Checkpoint* reference = nullptr);

// Fraction of records whose chosen continuation has the higher total
// log-likelihood given the prompt; ties count 0.5.
double preference_accuracy(const model::Checkpoint& ckpt,
                           const std::vector<data::PreferenceRecord>& records);

}  // namespace slam::dpo
