// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "slam/dpo/dpo.hpp"
#include "slam/error.hpp"
#include "slam/eval/auto_bleu.hpp"
#include "slam/model/likelihood.hpp"
#include "slam/model/sampling.hpp"
#include "slam/train/trainer.hpp"
#include "support/scenarios.hpp"

namespace slam::dpo {
namespace {

constexpr double kLn2 = 0.69314718055994529;

TEST(DpoLoss, EqualPolicyAndReferenceIsLn2) {
  for (double a : {-50.0, -3.25, 0.0, 7.5}) {
    for (double b : {-80.0, -1.0, 2.0}) {
      for (double beta : {0.01, 0.1, 1.0, 5.0}) {
        EXPECT_NEAR(dpo_loss(a, b, a, b, beta), kLn2, 1e-12);
      }
    }
  }
}

TEST(DpoLoss, HandEvaluatedMargins) {
  // beta 0.1, margin difference +-10: softplus(-+1).
  EXPECT_NEAR(dpo_loss(-10.0, -20.0, -20.0, -20.0, 0.1), 0.31326168751822286, 1e-12);
  EXPECT_NEAR(dpo_loss(-20.0, -10.0, -20.0, -20.0, 0.1), 1.3132616875182228, 1e-12);
}

TEST(DpoLoss, RescalingBetaAndMarginIsExact) {
  const double rc = -12.0, rr = -13.0;
  for (double c : {0.25, 0.5, 2.0, 4.0, 8.0}) {
    const double base = dpo_loss(-10.0, -16.0, rc, rr, 0.1);
    // Margin (pc - rc) - (pr - rr) = 5; scaled margin 5/c.
    const double pc = rc + 5.0 / c;
    EXPECT_EQ(dpo_loss(pc, rr, rc, rr, 0.1 * c), base);
  }
  EXPECT_NEAR(dpo_loss(rc + 5.0 / 3.0, rr, rc, rr, 0.3), dpo_loss(-10.0, -16.0, rc, rr, 0.1),
              1e-15);
}

TEST(DpoLoss, FiniteDifferenceSigns) {
  const double h = 1e-6;
  for (double pc : {-30.0, -10.0, 0.0}) {
    for (double pr : {-30.0, -12.0}) {
      const double dc =
          (dpo_loss(pc + h, pr, -11, -12, 0.1) - dpo_loss(pc - h, pr, -11, -12, 0.1)) / (2 * h);
      const double dr =
          (dpo_loss(pc, pr + h, -11, -12, 0.1) - dpo_loss(pc, pr - h, -11, -12, 0.1)) / (2 * h);
      EXPECT_LT(dc, 0.0);
      EXPECT_GT(dr, 0.0);
      const auto g = dpo_loss_grad(pc, pr, -11, -12, 0.1);
      EXPECT_NEAR(g.d_policy_chosen, dc, 1e-7);
      EXPECT_NEAR(g.d_policy_rejected, dr, 1e-7);
    }
  }
}

TEST(DpoLoss, StableForLargeMargins) {
  EXPECT_NEAR(dpo_loss(0, -1e6, 0, 0, 1.0), 0.0, 1e-300);
  EXPECT_NEAR(dpo_loss(-1e6, 0, 0, 0, 1.0), 1e6, 1e-6);
}

TEST(DpoLoss, Errors) {
  EXPECT_THROW(dpo_loss(std::numeric_limits<double>::infinity(), 0, 0, 0, 0.1), InputError);
  EXPECT_THROW(dpo_loss(std::nan(""), 0, 0, 0, 0.1), InputError);
  EXPECT_THROW(dpo_loss(0, 0, 0, 0, 0.0), ConfigError);
}

TEST(DpoConfig, DefaultsMirrorPreferenceRecipe) {
  const DPOConfig c;
  EXPECT_EQ(c.beta, 0.1);
  EXPECT_EQ(c.optim.peak_lr, 5e-5);
  EXPECT_EQ(c.optim.scheduler, train::Scheduler::kInverseSqrt);
  EXPECT_EQ(c.optim.per_device_batch, 4u);
  EXPECT_EQ(c.optim.grad_accum_steps, 16u);
  EXPECT_EQ(c.optim.max_grad_norm, 0.5);
  EXPECT_EQ(c.optim.total_steps, 813u);
  EXPECT_EQ(c.optim.context_length, 1024u);
}

DPOConfig toy_config(std::size_t steps) {
  DPOConfig c;
  c.optim.peak_lr = 3e-3;
  c.optim.min_lr = 3e-3;
  c.optim.scheduler = train::Scheduler::kCosineWithMin;
  c.optim.per_device_batch = 4;
  c.optim.grad_accum_steps = 2;
  c.optim.total_steps = steps;
  c.optim.context_length = 32;
  c.seed = 2;
  return c;
}

TEST(DpoTrain, FirstLossIsLn2AndReferenceUntouched) {
  auto s = testing::separable_preferences(16);
  const auto policy = model::build_model(s.config, 5);
  const model::Checkpoint reference = policy;
  const model::Checkpoint reference_copy = reference;
  train::BudgetClock budget({std::nullopt, 3, std::nullopt});
  const auto out = dpo_train(policy, s.records, toy_config(100), budget, &reference);
  ASSERT_EQ(out.log.steps.size(), 3u);
  EXPECT_NEAR(out.log.steps[0].loss, kLn2, 1e-9);
  EXPECT_NEAR(out.log.steps[0].margin, 0.0, 1e-9);
  EXPECT_EQ(reference, reference_copy);
  EXPECT_NE(out.checkpoint.parameters, policy.parameters);
  EXPECT_EQ(out.checkpoint.training_step, policy.training_step + 3);
}

TEST(DpoTrain, ZeroBudgetReturnsInput) {
  auto s = testing::separable_preferences(8);
  const auto policy = model::build_model(s.config, 5);
  train::BudgetClock budget({std::nullopt, 0, std::nullopt});
  const auto out = dpo_train(policy, s.records, toy_config(10), budget);
  EXPECT_EQ(out.checkpoint, policy);
  EXPECT_TRUE(out.log.steps.empty());
}

TEST(DpoTrain, Errors) {
  auto s = testing::separable_preferences(8);
  const auto policy = model::build_model(s.config, 5);
  train::BudgetClock budget({std::nullopt, 1, std::nullopt});
  EXPECT_THROW(dpo_train(policy, {}, toy_config(10), budget), ConfigError);
  auto long_records = s.records;
  long_records[0].chosen.assign(40, 1);
  EXPECT_THROW(dpo_train(policy, long_records, toy_config(10), budget), InputError);
  auto cfg = toy_config(10);
  cfg.beta = 0.0;
  EXPECT_THROW(dpo_train(policy, s.records, cfg, budget), ConfigError);
}

TEST(DpoTrain, EpochBoundedRun) {
  auto s = testing::separable_preferences(20);
  auto cfg = toy_config(1000);
  cfg.epochs = 2.0;
  train::BudgetClock budget({std::nullopt, 1000, std::nullopt});
  const auto out = dpo_train(model::build_model(s.config, 5), s.records, cfg, budget);
  // ceil(2 * 20 / 8) steps.
  EXPECT_EQ(out.log.steps.size(), 5u);
  EXPECT_EQ(out.log.stop_reason, "epochs");
  EXPECT_EQ(out.log.steps.back().records_seen, 40u);
}

TEST(DpoTrain, SeparablePreferencesAreLearned) {
  auto s = testing::separable_preferences(64);
  const auto policy = model::build_model(s.config, 5);
  const double before = preference_accuracy(policy, s.records);
  train::BudgetClock budget({std::nullopt, 200, std::nullopt});
  const auto out = dpo_train(policy, s.records, toy_config(200), budget);
  const double after = preference_accuracy(out.checkpoint, s.records);
  EXPECT_GT(after, 0.9) << "before " << before;
  EXPECT_GT(out.log.steps.back().reward_accuracy, 0.9);
  EXPECT_LT(out.log.steps.back().loss, kLn2);
}

TEST(PreferenceAccuracy, UniformModelTiesAtHalf) {
  auto s = testing::separable_preferences(30);
  auto ckpt = model::build_model(s.config, 5);
  for (auto& v : ckpt.parameters.at("lm_head").values) v = 0.0;
  EXPECT_EQ(preference_accuracy(ckpt, s.records), 0.5);
}

TEST(PreferenceAccuracy, ForbiddenTokenInRejectedGivesOne) {
  auto s = testing::separable_preferences(30);
  auto ckpt = model::build_model(s.config, 5);
  // With every block matrix zeroed the residual stream is the embedding.
  // Positive embeddings and a strongly negative head column make token 11
  // nearly impossible while all other tokens stay equally likely.
  for (auto& [name, arr] : ckpt.parameters) {
    if (name.rfind("layers.", 0) == 0 && name.find("norm") == std::string::npos) {
      std::fill(arr.values.begin(), arr.values.end(), 0.0);
    }
  }
  for (auto& v : ckpt.parameters.at("tok_embedding").values) v = std::abs(v) + 0.1;
  auto& head = ckpt.parameters.at("lm_head");
  const std::size_t vocab = head.shape[1];
  std::fill(head.values.begin(), head.values.end(), 0.0);
  for (std::size_t d = 0; d < head.shape[0]; ++d) head.values[d * vocab + 11] = -1e3;

  std::vector<data::PreferenceRecord> records;
  for (auto r : s.records) {
    std::replace(r.chosen.begin(), r.chosen.end(), Token{11}, Token{10});
    std::replace(r.rejected.begin(), r.rejected.end(), Token{11}, Token{10});
    r.rejected.back() = 11;
    records.push_back(r);
  }
  EXPECT_EQ(preference_accuracy(ckpt, records), 1.0);
}

TEST(DpoRegression, AutoBleuDoesNotBlowUpAfterDpo) {
  // Pretrain briefly on the source, run DPO, then compare the repetition of
  // penalised samples.
  auto s = testing::separable_preferences(64);
  data::GeneratorSpec spec;
  spec.vocab_size = 12;
  spec.branching = 2;
  spec.seed = 4;
  const auto corpus = data::synth_toy_corpus(spec, 200, {31, 31});
  data::PackOptions po;
  po.context_length = 32;
  po.sep_token = s.config.special_tokens.at(model::SpecialRole::kSeparator);
  po.pad_token = s.config.special_tokens.at(model::SpecialRole::kPad);
  po.model_vocab_size = s.config.vocab_size;
  auto packed = std::make_shared<const data::PackedDataset>(data::pack(corpus, po));
  data::BalancedBatcher batches({packed}, 8 * 32, 1);
  train::TrainRecipe recipe;
  recipe.peak_lr = 3e-3;
  recipe.min_lr = 1e-4;
  recipe.per_device_batch = 8;
  recipe.grad_accum_steps = 1;
  recipe.total_steps = 150;
  recipe.context_length = 32;
  train::BudgetClock pre_budget({std::nullopt, 150, std::nullopt});
  const auto base =
      train::train(model::build_model(s.config, 5), batches, recipe, pre_budget).checkpoint;

  // Preference data goes through the repetition filter, and the DPO rate
  // keeps the 1:20 ratio to the pretraining peak rate.
  const auto records = data::filter_by_auto_bleu(s.records, 0.3);
  ASSERT_FALSE(records.empty());
  auto cfg = toy_config(100);
  cfg.optim.peak_lr = cfg.optim.min_lr = recipe.peak_lr / 20.0;
  train::BudgetClock dpo_budget({std::nullopt, 100, std::nullopt});
  const auto tuned = dpo_train(base, records, cfg, dpo_budget).checkpoint;

  model::SamplingConfig sc;
  sc.max_new_tokens = 20;
  sc.seed = 7;
  double before = 0.0, after = 0.0;
  const std::size_t n = 20;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& prompt = s.records[i].prompt;
    before += eval::auto_bleu(model::generate(base, prompt, sc));
    after += eval::auto_bleu(model::generate(tuned, prompt, sc));
  }
  before /= n;
  after /= n;
  EXPECT_LE(after, before + 0.1) << "before " << before << " after " << after;
}

}  // namespace
}  // namespace slam::dpo
