// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/dpo/dpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "../common/text.hpp"
#include "slam/error.hpp"
#include "slam/model/accounting.hpp"
#include "slam/model/likelihood.hpp"
#include "slam/model/transformer.hpp"
#include "slam/random.hpp"
#include "slam/train/optim.hpp"

namespace slam::dpo {

namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

TokenSeq concat(const TokenSeq& a, const TokenSeq& b) {
  TokenSeq s = a;
  s.insert(s.end(), b.begin(), b.end());
  return s;
}

TokenMatrix as_row(const TokenSeq& seq) {
  TokenMatrix m(1, seq.size());
  std::copy(seq.begin(), seq.end(), m.data.begin());
  return m;
}

// A policy forward pass over prompt + continuation, kept alive so the
// gradient can be taken once the DPO weights are known.
struct ScoredSequence {
  TokenSeq seq;
  std::size_t prompt_length;
  model::TrainingPass pass;
  double total;

  ScoredSequence(const model::Checkpoint& ckpt, const TokenSeq& prompt, const TokenSeq& cont)
      : seq(concat(prompt, cont)),
        prompt_length(prompt.size()),
        pass(ckpt, as_row(seq)) {
    total = model::score_continuation(pass.logits(), 0, seq, prompt_length).total;
  }

  void backward(double weight, model::NamedArrays& grads) const {
    const auto& logits = pass.logits();
    model::Logits dlogits(1, seq.size(), logits.vocab);
    for (std::size_t i = std::max<std::size_t>(prompt_length, 1); i < seq.size(); ++i) {
      model::accumulate_log_prob_grad(logits.at(0, i - 1), seq[i], weight, dlogits.at(0, i - 1));
    }
    pass.backward(dlogits, grads);
  }
};

}  // namespace

LossGrad dpo_loss_grad(double pc, double pr, double rc, double rr, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("dpo: beta must be positive");
  if (!std::isfinite(pc) || !std::isfinite(pr) || !std::isfinite(rc) || !std::isfinite(rr)) {
    throw InputError("dpo: log-likelihoods must be finite");
  }
  LossGrad g;
  g.margin = beta * ((pc - rc) - (pr - rr));
  g.loss = softplus(-g.margin);
  const double s = sigmoid(-g.margin);
  g.d_policy_chosen = -beta * s;
  g.d_policy_rejected = beta * s;
  return g;
}

double dpo_loss(double pc, double pr, double rc, double rr, double beta) {
  return dpo_loss_grad(pc, pr, rc, rr, beta).loss;
}

train::TrainRecipe default_dpo_optimizer() {
  train::TrainRecipe r;
  r.peak_lr = 5e-5;
  r.min_lr = 5e-5;
  r.warmup_ratio = 0.0;
  r.scheduler = train::Scheduler::kInverseSqrt;
  r.per_device_batch = 4;
  r.grad_accum_steps = 16;
  r.max_grad_norm = 0.5;
  r.total_steps = 813;
  r.context_length = 1024;
  r.dtype = "bfloat16";
  return r;
}

void DPOConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("dpo: beta must be positive");
  if (epochs && !(*epochs > 0.0)) throw ConfigError("dpo: epochs must be positive");
  optim.validate();
}

void DpoLog::write_csv(std::ostream& out) const {
  out << "step,records_seen,loss,margin,reward_accuracy,lr,grad_norm\n";
  for (const auto& r : steps) {
    out << r.step << ',' << r.records_seen << ',' << text::format_double(r.loss) << ','
        << text::format_double(r.margin) << ',' << text::format_double(r.reward_accuracy) << ','
        << text::format_double(r.lr) << ',' << text::format_double(r.grad_norm) << '\n';
  }
}

DpoResult dpo_train(model::Checkpoint policy, const std::vector<data::PreferenceRecord>& records,
                    const DPOConfig& cfg, train::BudgetClock& budget,
                    const model::Checkpoint* reference) {
  cfg.validate();
  if (records.empty()) throw ConfigError("dpo: no preference records");
  model::validate_checkpoint(policy);
  for (const auto& r : records) r.validate(policy.config.context_length);

  // Reference scores are fixed for the whole run.
  const model::Checkpoint frozen = reference ? *reference : policy;
  if (frozen.config.vocab_size != policy.config.vocab_size) {
    throw ConfigError("dpo: reference and policy vocabularies differ");
  }
  std::vector<double> ref_chosen(records.size()), ref_rejected(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ref_chosen[i] = model::sequence_log_likelihood(frozen, records[i].prompt, records[i].chosen).total;
    ref_rejected[i] =
        model::sequence_log_likelihood(frozen, records[i].prompt, records[i].rejected).total;
  }

  const std::size_t per_step = cfg.optim.per_device_batch * cfg.optim.grad_accum_steps;
  train::TrainRecipe sched = cfg.optim;
  if (cfg.epochs) {
    sched.total_steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(*cfg.epochs * static_cast<double>(records.size()) /
                                              static_cast<double>(per_step))));
  }
  const train::AdamWHyper hyper{sched.adam_beta1, sched.adam_beta2, sched.adam_eps,
                                sched.weight_decay};

  const std::uint64_t n_params = model::param_count(policy.config);
  DpoResult result;
  model::NamedArrays state;
  std::vector<std::size_t> order(records.size());
  std::size_t cursor = records.size();
  std::uint64_t epoch = 0;
  Rng order_rng = make_rng(cfg.seed, streams::kDpoOrder);
  std::size_t seen = 0;

  budget.start();
  for (std::size_t step = 1;; ++step) {
    if (step > sched.total_steps) {
      result.log.stop_reason = cfg.epochs ? "epochs" : "total_steps";
      break;
    }
    if (const auto reason = budget.exhaustion_reason()) {
      result.log.stop_reason = *reason;
      break;
    }
    std::vector<std::size_t> chosen_ids;
    for (std::size_t k = 0; k < per_step; ++k) {
      if (cursor == order.size()) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), order_rng);
        cursor = 0;
        ++epoch;
      }
      chosen_ids.push_back(order[cursor++]);
    }

    model::NamedArrays grads = model::zeros_like(policy.parameters);
    const double w = 1.0 / static_cast<double>(chosen_ids.size());
    double loss = 0.0, margin = 0.0, wins = 0.0;
    std::uint64_t step_tokens = 0;
    for (std::size_t id : chosen_ids) {
      const auto& r = records[id];
      const ScoredSequence chosen(policy, r.prompt, r.chosen);
      const ScoredSequence rejected(policy, r.prompt, r.rejected);
      const auto g = dpo_loss_grad(chosen.total, rejected.total, ref_chosen[id], ref_rejected[id],
                                   cfg.beta);
      chosen.backward(w * g.d_policy_chosen, grads);
      rejected.backward(w * g.d_policy_rejected, grads);
      step_tokens += chosen.seq.size() + rejected.seq.size();
      loss += w * g.loss;
      margin += w * g.margin;
      wins += g.margin > 0.0 ? w : 0.0;
    }
    if (!std::isfinite(loss)) throw NumericError("dpo: loss is not finite at step " + std::to_string(step));

    const double norm = train::clip_grad_norm(grads, sched.max_grad_norm);
    const double lr = train::lr_at(step, sched);
    train::adamw_step(policy.parameters, grads, state, lr, hyper);
    ++policy.training_step;
    seen += chosen_ids.size();
    budget.record_step(model::flops_estimate(n_params, step_tokens));
    result.log.steps.push_back({step, seen, loss, margin, wins, lr, norm});
  }
  budget.pause();
  if (!result.log.steps.empty()) policy.optimizer_state = std::move(state);
  result.checkpoint = std::move(policy);
  return result;
}

double preference_accuracy(const model::Checkpoint& ckpt,
                           const std::vector<data::PreferenceRecord>& records) {
  if (records.empty()) return 0.0;
  double score = 0.0;
  for (const auto& r : records) {
    const double c = model::sequence_log_likelihood(ckpt, r.prompt, r.chosen).total;
    const double j = model::sequence_log_likelihood(ckpt, r.prompt, r.rejected).total;
    score += c > j ? 1.0 : (c == j ? 0.5 : 0.0);
  }
  return score / static_cast<double>(records.size());
}

}  // namespace slam::dpo
