// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "slam/data/batching.hpp"
#include "slam/data/packing.hpp"
#include "slam/model/checkpoint.hpp"
#include "slam/train/budget.hpp"
#include "slam/train/log.hpp"
#include "slam/train/recipe.hpp"

namespace slam::train {

struct TrainHooks {
  const data::PackedDataset* validation = nullptr;
  std::function<void(const model::Checkpoint&)> on_checkpoint;
  std::function<void(const StepRecord&)> on_step;
};

struct TrainResult {
  model::Checkpoint checkpoint;
  TrainLog log;
};

// Each optimizer step pulls grad_accum_steps micro-batches from `batches`.
// Step numbering continues from checkpoint.training_step; training stops at
// recipe.total_steps or the first exhausted budget limit.
TrainResult train(model::Checkpoint checkpoint, data::BatchStream& batches,
                  const TrainRecipe& recipe, BudgetClock& budget, const TrainHooks& hooks = {});

// Token-weighted mean NLL over every chunk of `dataset`.
double validation_loss(const model::Checkpoint& checkpoint, const data::PackedDataset& dataset,
                       std::size_t batch_rows = 8);

}  // namespace slam::train
