// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/train/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "slam/error.hpp"
#include "slam/model/accounting.hpp"
#include "slam/model/likelihood.hpp"
#include "slam/model/transformer.hpp"
#include "slam/train/optim.hpp"

namespace slam::train {

namespace {

bool any_scored(const TokenMask& mask) {
  return std::any_of(mask.data.begin(), mask.data.end(), [](std::uint8_t m) { return m != 0; });
}

}  // namespace

double validation_loss(const model::Checkpoint& ckpt, const data::PackedDataset& dataset,
                       std::size_t batch_rows) {
  if (batch_rows == 0) throw ConfigError("validation: batch_rows must be positive");
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t begin = 0; begin < dataset.size(); begin += batch_rows) {
    const std::size_t rows = std::min(batch_rows, dataset.size() - begin);
    TokenMatrix chunks(rows, dataset.context_length);
    std::copy_n(dataset.chunks.data.begin() +
                    static_cast<std::ptrdiff_t>(begin * dataset.context_length),
                rows * dataset.context_length, chunks.data.begin());
    const auto ex = data::make_training_example(
        chunks, std::span<const std::uint32_t>(dataset.valid_lengths.data() + begin, rows));
    const auto n = static_cast<std::size_t>(std::count(ex.mask.data.begin(), ex.mask.data.end(), 1));
    if (n == 0) continue;
    total += model::nll_loss(model::forward(ckpt, ex.inputs), ex.targets, ex.mask) *
             static_cast<double>(n);
    count += n;
  }
  if (count == 0) throw InputError("validation: dataset has no scored tokens");
  return total / static_cast<double>(count);
}

TrainResult train(model::Checkpoint ckpt, data::BatchStream& batches, const TrainRecipe& recipe,
                  BudgetClock& budget, const TrainHooks& hooks) {
  recipe.validate();
  model::validate_checkpoint(ckpt);
  const std::uint64_t n_params = model::param_count(ckpt.config);
  const AdamWHyper hyper{recipe.adam_beta1, recipe.adam_beta2, recipe.adam_eps,
                         recipe.weight_decay};
  const bool use_dropout = ckpt.config.dropout_rate > 0.0;
  const std::size_t accum = recipe.grad_accum_steps;

  TrainResult result;
  model::NamedArrays state = ckpt.optimizer_state.value_or(model::NamedArrays{});
  std::uint64_t tokens_seen = 0;
  bool stepped = false;

  const auto validate_now = [&](std::size_t step) {
    if (!hooks.validation) return;
    budget.pause();
    const double loss = validation_loss(ckpt, *hooks.validation);
    result.log.validation.push_back({step, tokens_seen,
                                     model::flops_estimate(n_params, tokens_seen), loss,
                                     std::exp(loss)});
    budget.resume();
  };

  budget.start();
  while (true) {
    const std::size_t step = ckpt.training_step + 1;
    if (step > recipe.total_steps) {
      result.log.stop_reason = "total_steps";
      break;
    }
    if (const auto reason = budget.exhaustion_reason()) {
      result.log.stop_reason = *reason;
      break;
    }

    std::vector<data::TrainingExample> micro;
    std::uint64_t step_tokens = 0;
    for (std::size_t a = 0; a < accum; ++a) {
      const auto batch = batches.next();
      step_tokens += batch.chunks.rows * batch.chunks.cols;
      auto ex = data::make_training_example(batch.chunks, batch.valid_lengths);
      if (any_scored(ex.mask)) micro.push_back(std::move(ex));
    }
    if (micro.empty()) throw InputError("train: step " + std::to_string(step) + " has no scored tokens");

    // Mean of per-micro-batch mean losses.
    model::NamedArrays grads = model::zeros_like(ckpt.parameters);
    const double inv = 1.0 / static_cast<double>(micro.size());
    double loss = 0.0;
    for (std::size_t a = 0; a < micro.size(); ++a) {
      std::optional<model::DropoutContext> dropout;
      if (use_dropout) dropout = model::DropoutContext{recipe.seed, step * accum + a};
      const model::TrainingPass pass(ckpt, micro[a].inputs, dropout);
      auto lg = model::nll_loss_with_grad(pass.logits(), micro[a].targets, micro[a].mask);
      for (double& d : lg.dlogits.values) d *= inv;
      pass.backward(lg.dlogits, grads);
      loss += lg.loss * inv;
    }
    if (!std::isfinite(loss)) throw NumericError("train: loss is not finite at step " + std::to_string(step));

    const double norm = clip_grad_norm(grads, recipe.max_grad_norm);
    const double lr = lr_at(step, recipe);
    adamw_step(ckpt.parameters, grads, state, lr, hyper);
    ckpt.training_step = step;
    stepped = true;
    tokens_seen += step_tokens;
    budget.record_step(model::flops_estimate(n_params, step_tokens));

    const StepRecord rec{step, tokens_seen, model::flops_estimate(n_params, tokens_seen), loss, lr,
                         norm};
    result.log.steps.push_back(rec);
    if (hooks.on_step) hooks.on_step(rec);

    if (recipe.validation_interval > 0 && step % recipe.validation_interval == 0) {
      validate_now(step);
    }
    if (hooks.on_checkpoint && recipe.checkpoint_interval > 0 &&
        step % recipe.checkpoint_interval == 0) {
      model::Checkpoint snapshot = ckpt;
      snapshot.optimizer_state = state;
      hooks.on_checkpoint(snapshot);
    }
  }
  if (stepped) {
    ckpt.optimizer_state = std::move(state);
    if (result.log.validation.empty() || result.log.validation.back().step != ckpt.training_step) {
      validate_now(ckpt.training_step);
    }
  }
  budget.pause();
  result.checkpoint = std::move(ckpt);
  return result;
}

}  // namespace slam::train
