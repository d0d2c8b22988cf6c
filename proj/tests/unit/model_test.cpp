// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "slam/error.hpp"
#include "slam/model/accounting.hpp"
#include "slam/model/checkpoint.hpp"
#include "slam/model/likelihood.hpp"
#include "slam/model/rope.hpp"
#include "slam/model/surgery.hpp"
#include "slam/model/transformer.hpp"
#include "support/grad_check.hpp"
#include "support/toy.hpp"

namespace slam::model {
namespace {

using testing::grad_check_config;
using testing::random_tokens;
using testing::reference_toy_config;

// Shape enumeration written out independently of parameter_specs().
std::uint64_t enumerate_params(std::uint64_t v, std::uint64_t d, std::uint64_t layers,
                               std::uint64_t f, bool tied) {
  std::uint64_t total = v * d;                // input embedding
  for (std::uint64_t l = 0; l < layers; ++l) {
    total += d;                               // attention norm gain
    total += d * d + d * d + d * d + d * d;   // q, k, v, o
    total += d;                               // ffn norm gain
    total += d * f + f * d;                   // up, down
  }
  total += d;                                 // final norm
  if (!tied) total += d * v;                  // output projection
  return total;
}

TEST(ParamCountTest, ReferenceToyConfig) {
  const auto cfg = reference_toy_config();
  EXPECT_EQ(param_count(cfg), 162624u);
  EXPECT_EQ(param_count(cfg), enumerate_params(500, 64, 2, 256, false));
  const auto ckpt = build_model(cfg, 1);
  std::uint64_t n = 0;
  for (const auto& [name, arr] : ckpt.parameters) n += arr.numel();
  EXPECT_EQ(n, 162624u);
}

TEST(ParamCountTest, TiedDiffersByOneEmbedding) {
  auto cfg = reference_toy_config();
  const auto untied = param_count(cfg);
  cfg.tie_embeddings = true;
  EXPECT_EQ(untied - param_count(cfg), cfg.vocab_size * cfg.model_dim);
  EXPECT_EQ(param_count(cfg), enumerate_params(500, 64, 2, 256, true));
}

TEST(ParamCountTest, DoublingLayersAddsBlocks) {
  auto cfg = reference_toy_config();
  const auto base = param_count(cfg);
  const auto per_block = enumerate_params(500, 64, 3, 256, false) -
                         enumerate_params(500, 64, 2, 256, false);
  cfg.n_layers *= 2;
  EXPECT_EQ(param_count(cfg) - base, 2 * per_block);
  EXPECT_EQ(block_param_count(cfg), per_block);
}

TEST(FlopsTest, SixNd) {
  EXPECT_DOUBLE_EQ(flops_estimate(358347904, 1400000000), 3.0101223936e18);
  EXPECT_EQ(flops_estimate(0, 12345), 0.0);
  EXPECT_EQ(flops_estimate(1, 1), 6.0);
  EXPECT_EQ(flops_estimate(20, 7) + flops_estimate(20, 5), flops_estimate(20, 12));
  EXPECT_EQ(flops_estimate(3, 9) * 2, flops_estimate(6, 9));
}

TEST(BuildModelTest, DeterministicForSeed) {
  const auto cfg = reference_toy_config();
  EXPECT_EQ(build_model(cfg, 7).parameters, build_model(cfg, 7).parameters);
  EXPECT_NE(build_model(cfg, 7).parameters, build_model(cfg, 8).parameters);
}

TEST(BuildModelTest, InitializationRecipe) {
  const auto ckpt = build_model(reference_toy_config(), 3);
  for (double v : ckpt.parameters.at("final_norm").values) EXPECT_EQ(v, 1.0);
  const auto& wq = ckpt.parameters.at("layers.0.wq").values;
  double sq = 0.0;
  for (double v : wq) {
    EXPECT_LE(std::abs(v), 0.04);
    sq += v * v;
  }
  const double std = std::sqrt(sq / static_cast<double>(wq.size()));
  EXPECT_NEAR(std, 0.02 * 0.88, 0.002);  // truncation at 2 std shrinks it to ~0.88
}

TEST(BuildModelTest, RejectsInvalidConfigs) {
  auto cfg = reference_toy_config();
  cfg.n_heads = 3;
  EXPECT_THROW(build_model(cfg, 0), ConfigError);
  cfg = reference_toy_config();
  cfg.n_layers = 0;
  EXPECT_THROW(build_model(cfg, 0), ConfigError);
  cfg = reference_toy_config();
  cfg.n_heads = 32;  // head_dim 2 is fine
  EXPECT_NO_THROW(cfg.validate());
  cfg.n_heads = 64;  // head_dim 1 is odd
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = reference_toy_config();
  cfg.context_length = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = reference_toy_config();
  cfg.special_tokens = {{SpecialRole::kPad, 3}, {SpecialRole::kSeparator, 3}};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.special_tokens = {{SpecialRole::kPad, 500}};
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(ForwardTest, Causality) {
  const auto cfg = grad_check_config();
  const auto ckpt = build_model(cfg, 11);
  auto batch = random_tokens(2, 8, cfg.vocab_size, 5);
  const auto base = forward(ckpt, batch);
  for (std::size_t t = 1; t < 8; ++t) {
    auto changed = batch;
    changed.at(0, t) = (changed.at(0, t) + 1) % cfg.vocab_size;
    const auto out = forward(ckpt, changed);
    for (std::size_t tp = 0; tp < t; ++tp) {
      const auto a = base.at(0, tp);
      const auto b = out.at(0, tp);
      for (std::size_t v = 0; v < cfg.vocab_size; ++v) ASSERT_EQ(a[v], b[v]);
    }
    // Other rows in the batch are untouched as well.
    for (std::size_t tp = 0; tp < 8; ++tp) {
      const auto a = base.at(1, tp);
      const auto b = out.at(1, tp);
      for (std::size_t v = 0; v < cfg.vocab_size; ++v) ASSERT_EQ(a[v], b[v]);
    }
  }
}

TEST(ForwardTest, ZeroHeadGivesUniformDistribution) {
  const auto cfg = reference_toy_config();
  auto ckpt = build_model(cfg, 2);
  for (auto& v : ckpt.parameters.at("lm_head").values) v = 0.0;
  const auto batch = random_tokens(2, 10, cfg.vocab_size, 1);
  const auto logits = forward(ckpt, batch);
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t t = 0; t < 10; ++t) {
      EXPECT_NEAR(-token_log_prob(logits.at(b, t), batch.at(b, t)), std::log(500.0), 1e-12);
    }
  }
}

TEST(ForwardTest, InputErrors) {
  const auto cfg = grad_check_config();
  const auto ckpt = build_model(cfg, 0);
  TokenMatrix bad(1, 3, 0);
  bad.at(0, 1) = static_cast<Token>(cfg.vocab_size);
  EXPECT_THROW(forward(ckpt, bad), InputError);
  EXPECT_THROW(forward(ckpt, TokenMatrix(1, cfg.context_length + 1, 0)), InputError);
}

TEST(ForwardTest, MatchesGoldenLogits) {
  const auto cfg = grad_check_config();
  const auto ckpt = build_model(cfg, 2024);
  const auto batch = random_tokens(2, 8, cfg.vocab_size, 2024);
  const auto logits = forward(ckpt, batch);
  const std::string path = std::string(SLAM_GOLDEN_DIR) + "/forward_logits.txt";
  if (std::getenv("SLAM_REGEN_GOLDEN")) {
    std::ofstream out(path);
    out << std::setprecision(17);
    for (double v : logits.values) out << v << '\n';
  }
  std::ifstream in(path);
  ASSERT_TRUE(in) << "missing golden file " << path;
  std::vector<double> golden;
  for (double v; in >> v;) golden.push_back(v);
  ASSERT_EQ(golden.size(), logits.values.size());
  for (std::size_t i = 0; i < golden.size(); ++i) {
    EXPECT_NEAR(logits.values[i], golden[i], 1e-12) << "index " << i;
  }
}

TEST(ForwardTest, ConcurrentCallsAgree) {
  const auto cfg = grad_check_config();
  const auto ckpt = build_model(cfg, 9);
  const auto batch = random_tokens(3, 8, cfg.vocab_size, 4);
  const auto expected = forward(ckpt, batch);
  std::vector<Logits> results(4);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < results.size(); ++i) {
    threads.emplace_back([&, i] { results[i] = forward(ckpt, batch); });
  }
  for (auto& t : threads) t.join();
  for (const auto& r : results) EXPECT_EQ(r.values, expected.values);
}

TEST(NllLossTest, UniformLogits) {
  Logits logits(2, 3, 500);
  TokenMatrix targets(2, 3, 17);
  TokenMask mask(2, 3, 1);
  EXPECT_NEAR(nll_loss(logits, targets, mask), std::log(500.0), 1e-12);
  EXPECT_NEAR(std::log(500.0), 6.2146, 1e-4);
}

TEST(NllLossTest, LargeMarginApproachesZero) {
  Logits logits(1, 2, 10);
  TokenMatrix targets(1, 2);
  targets.at(0, 0) = 3;
  targets.at(0, 1) = 9;
  logits.at(0, 0)[3] = 100.0;
  logits.at(0, 1)[9] = 100.0;
  TokenMask mask(1, 2, 1);
  const double loss = nll_loss(logits, targets, mask);
  EXPECT_GE(loss, 0.0);
  EXPECT_LT(loss, 1e-30);
}

TEST(NllLossTest, MatchesBruteForceSoftmax) {
  Rng rng = make_rng(123);
  std::normal_distribution<double> normal(0.0, 2.0);
  Logits logits(3, 5, 13);
  for (auto& v : logits.values) v = normal(rng);
  const auto targets = random_tokens(3, 5, 13, 8);
  TokenMask mask(3, 5, 1);
  mask.at(1, 2) = 0;
  mask.at(2, 4) = 0;
  double total = 0.0;
  int count = 0;
  for (std::size_t b = 0; b < 3; ++b) {
    for (std::size_t t = 0; t < 5; ++t) {
      if (!mask.at(b, t)) continue;
      double z = 0.0;
      for (double v : logits.at(b, t)) z += std::exp(v);
      total += -std::log(std::exp(logits.at(b, t)[targets.at(b, t)]) / z);
      ++count;
    }
  }
  EXPECT_NEAR(nll_loss(logits, targets, mask), total / count, 1e-6);
  EXPECT_NEAR(nll_loss_with_grad(logits, targets, mask).loss, total / count, 1e-12);
}

TEST(NllLossTest, AllMaskedIsAnError) {
  Logits logits(1, 4, 5);
  EXPECT_THROW(nll_loss(logits, TokenMatrix(1, 4), TokenMask(1, 4, 0)), InputError);
}

TEST(NllLossTest, ShapeMismatchIsAnError) {
  Logits logits(1, 4, 5);
  EXPECT_THROW(nll_loss(logits, TokenMatrix(1, 3), TokenMask(1, 4, 1)), InputError);
}

TEST(SequenceLikelihoodTest, UniformModel) {
  const auto cfg = reference_toy_config();
  auto ckpt = build_model(cfg, 4);
  for (auto& v : ckpt.parameters.at("lm_head").values) v = 0.0;
  const TokenSeq prompt{1, 2, 3};
  const TokenSeq cont{9, 8, 7, 6, 5};
  const auto s = sequence_log_likelihood(ckpt, prompt, cont);
  EXPECT_EQ(s.n_scored, 5u);
  EXPECT_NEAR(s.total, -5.0 * std::log(500.0), 1e-9);
  EXPECT_NEAR(s.per_token(), -std::log(500.0), 1e-12);
}

TEST(SequenceLikelihoodTest, EmptyPromptIsFullSequenceLikelihood) {
  const auto cfg = grad_check_config();
  const auto ckpt = build_model(cfg, 4);
  const TokenSeq seq{1, 5, 2, 7, 3};
  const auto s = sequence_log_likelihood(ckpt, {}, seq);
  TokenMatrix batch(1, seq.size());
  std::copy(seq.begin(), seq.end(), batch.data.begin());
  const auto logits = forward(ckpt, batch);
  double expected = 0.0;
  for (std::size_t i = 1; i < seq.size(); ++i) expected += token_log_prob(logits.at(0, i - 1), seq[i]);
  EXPECT_EQ(s.n_scored, seq.size() - 1);
  EXPECT_NEAR(s.total, expected, 1e-12);
}

TEST(SequenceLikelihoodTest, AgreesWithNllLoss) {
  const auto cfg = grad_check_config();
  const auto ckpt = build_model(cfg, 5);
  const TokenSeq prompt{3, 1};
  const TokenSeq cont{4, 4, 0, 6};
  const auto s = sequence_log_likelihood(ckpt, prompt, cont);
  // Per-step nll_loss on each continuation token, summed.
  TokenSeq full = prompt;
  full.insert(full.end(), cont.begin(), cont.end());
  double nll_sum = 0.0;
  for (std::size_t i = prompt.size(); i < full.size(); ++i) {
    TokenMatrix in(1, i);
    std::copy(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(i), in.data.begin());
    const auto logits = forward(ckpt, in);
    TokenMatrix target(1, i, 0);
    TokenMask mask(1, i, 0);
    target.at(0, i - 1) = full[i];
    mask.at(0, i - 1) = 1;
    nll_sum += nll_loss(logits, target, mask);
  }
  EXPECT_NEAR(-s.total, nll_sum, 1e-6);
}

TEST(SequenceLikelihoodTest, Errors) {
  const auto cfg = grad_check_config();
  const auto ckpt = build_model(cfg, 5);
  EXPECT_THROW(sequence_log_likelihood(ckpt, TokenSeq{1}, TokenSeq{}), InputError);
  EXPECT_THROW(sequence_log_likelihood(ckpt, TokenSeq(5, 1), TokenSeq(4, 1)), InputError);
}

TEST(RopeTest, PositionZeroIsIdentity) {
  const std::vector<double> x{0.3, -1.2, 2.5, 0.7, 1.1, -0.4, 0.0, 9.0};
  const std::vector<std::size_t> pos{0};
  EXPECT_EQ(rope_apply<double>(x, 2, 4, pos, 10000.0), x);
}

TEST(RopeTest, HandComputedRotation) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<std::size_t> pos{1};
  const auto y = rope_apply<double>(x, 1, 4, pos, 10000.0);
  // angles 1 and 10000^(-2/4) = 0.01
  EXPECT_NEAR(y[0], -1.1426396637476532, 1e-15);
  EXPECT_NEAR(y[1], 1.922075596544176, 1e-15);
  EXPECT_NEAR(y[2], 2.9598506679133294, 1e-15);
  EXPECT_NEAR(y[3], 4.029799501669161, 1e-15);
}

TEST(RopeTest, PreservesPairNorms) {
  Rng rng = make_rng(1);
  std::normal_distribution<double> normal;
  std::vector<double> x(5 * 3 * 6);
  for (auto& v : x) v = normal(rng);
  const std::vector<std::size_t> pos{0, 3, 17, 100, 1023};
  const auto y = rope_apply<double>(x, 3, 6, pos, 500.0);
  for (std::size_t i = 0; i < x.size(); i += 2) {
    EXPECT_NEAR(std::hypot(x[i], x[i + 1]), std::hypot(y[i], y[i + 1]), 1e-12);
  }
}

TEST(RopeTest, RelativePositionPropertyInSinglePrecision) {
  Rng rng = make_rng(2);
  std::normal_distribution<float> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<float> q(16), k(16);
    for (auto& v : q) v = normal(rng);
    for (auto& v : k) v = normal(rng);
    std::uniform_int_distribution<std::size_t> pd(0, 200);
    const std::size_t m = pd(rng), n = pd(rng), s = pd(rng);
    auto dot_at = [&](std::size_t pm, std::size_t pn) {
      const std::vector<std::size_t> a{pm}, b{pn};
      const auto qr = rope_apply<float>(q, 1, 16, a, 10000.0);
      const auto kr = rope_apply<float>(k, 1, 16, b, 10000.0);
      float d = 0.0f;
      for (std::size_t i = 0; i < 16; ++i) d += qr[i] * kr[i];
      return d;
    };
    EXPECT_NEAR(dot_at(m, n), dot_at(m + s, n + s), 1e-5f);
  }
}

TEST(RopeTest, OddHeadDimIsConfigError) {
  std::vector<double> x(3);
  const std::vector<std::size_t> pos{1};
  EXPECT_THROW(rope_apply<double>(x, 1, 3, pos, 10000.0), ConfigError);
}

void expect_gradients_match(const ModelConfig& cfg, std::optional<DropoutContext> dropout) {
  auto ckpt = build_model(cfg, 31);
  // Move norm gains off 1.0 so their gradients are exercised generically.
  Rng rng = make_rng(77);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  for (auto& [name, arr] : ckpt.parameters) {
    if (arr.shape.size() == 1) for (auto& v : arr.values) v = jitter(rng);
  }
  const auto inputs = random_tokens(2, 7, cfg.vocab_size, 3);
  const auto targets = random_tokens(2, 7, cfg.vocab_size, 4);
  TokenMask mask(2, 7, 1);
  mask.at(1, 6) = 0;

  TrainingPass pass(ckpt, inputs, dropout);
  const auto lg = nll_loss_with_grad(pass.logits(), targets, mask);
  auto analytic = zeros_like(ckpt.parameters);
  pass.backward(lg.dlogits, analytic);

  const auto numeric = testing::numeric_gradients(ckpt, [&] {
    TrainingPass p(ckpt, inputs, dropout);
    return nll_loss(p.logits(), targets, mask);
  });
  for (const auto& [name, err] : testing::compare_gradients(analytic, numeric)) {
    EXPECT_LT(err.relative_error, 1e-4) << name;
    EXPECT_GT(err.numeric_norm, 0.0) << name;
  }
}

TEST(GradientTest, UntiedMatchesFiniteDifferences) {
  const auto cfg = grad_check_config(false);
  ASSERT_LE(param_count(cfg), 10000u);
  expect_gradients_match(cfg, std::nullopt);
}

TEST(GradientTest, TiedMatchesFiniteDifferences) {
  expect_gradients_match(grad_check_config(true), std::nullopt);
}

TEST(GradientTest, WithDropoutMatchesFiniteDifferences) {
  auto cfg = grad_check_config(false);
  cfg.dropout_rate = 0.2;
  expect_gradients_match(cfg, DropoutContext{5, 1});
}

TEST(SurgeryTest, ShrinksVocabulary) {
  auto cfg = reference_toy_config();
  cfg.vocab_size = 1000;
  const auto src = build_model(cfg, 1);
  const auto out = resize_vocabulary(src, 500, {}, EmbeddingInit::kNormalMatchedStd, 3);
  EXPECT_EQ(param_count(src.config) - param_count(out.config), 2u * 500 * 64);
  EXPECT_EQ(param_count(src.config) - param_count(out.config), 64000u);
  for (const auto& [name, arr] : src.parameters) {
    if (name == "tok_embedding" || name == "lm_head") continue;
    EXPECT_EQ(out.parameters.at(name), arr) << name;
  }
  EXPECT_EQ(out.parameters.at("tok_embedding").shape, (std::vector<std::size_t>{500, 64}));
  EXPECT_EQ(out.parameters.at("lm_head").shape, (std::vector<std::size_t>{64, 500}));
  const auto logits = forward(out, random_tokens(1, 6, 500, 2));
  for (double v : logits.values) EXPECT_TRUE(std::isfinite(v));
}

TEST(SurgeryTest, TiedDeltaIsOneMatrix) {
  auto cfg = reference_toy_config();
  cfg.tie_embeddings = true;
  const auto src = build_model(cfg, 1);
  const auto out = resize_vocabulary(src, 300, {}, EmbeddingInit::kZeros);
  EXPECT_EQ(param_count(src.config) - param_count(out.config), 200u * 64);
  EXPECT_FALSE(out.parameters.count("lm_head"));
}

TEST(SurgeryTest, InitPolicies) {
  auto cfg = reference_toy_config();
  const auto src = build_model(cfg, 1);
  const auto zeros = resize_vocabulary(src, 20, {}, EmbeddingInit::kZeros);
  for (double v : zeros.parameters.at("tok_embedding").values) EXPECT_EQ(v, 0.0);
  const auto mean = resize_vocabulary(src, 20, {}, EmbeddingInit::kMeanEmbedding);
  const auto& e = mean.parameters.at("tok_embedding").values;
  for (std::size_t r = 1; r < 20; ++r) {
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(e[r * 64 + i], e[i]);
  }
  const auto matched = resize_vocabulary(src, 2000, {}, EmbeddingInit::kNormalMatchedStd, 5);
  double sq = 0.0;
  for (double v : matched.parameters.at("tok_embedding").values) sq += v * v;
  EXPECT_NEAR(std::sqrt(sq / (2000.0 * 64)), 0.02 * 0.88, 0.001);
}

TEST(SurgeryTest, SpecialTokensAreCarriedAndChecked) {
  const auto src = build_model(reference_toy_config(), 1);
  const std::map<SpecialRole, Token> specials{{SpecialRole::kPad, 500},
                                              {SpecialRole::kSeparator, 501}};
  const auto out = resize_vocabulary(src, 502, specials, EmbeddingInit::kZeros);
  EXPECT_EQ(out.config.special_tokens, specials);
  EXPECT_THROW(resize_vocabulary(src, 501, specials, EmbeddingInit::kZeros), ConfigError);
}

TEST(SurgeryTest, TiedSourceWithHeadIsFormatError) {
  auto cfg = reference_toy_config();
  auto src = build_model(cfg, 1);
  src.config.tie_embeddings = true;  // but lm_head still present
  EXPECT_THROW(resize_vocabulary(src, 100, {}, EmbeddingInit::kZeros), FormatError);
  auto untied = build_model(cfg, 1);
  untied.parameters.at("lm_head").shape = {500, 64};
  EXPECT_THROW(resize_vocabulary(untied, 100, {}, EmbeddingInit::kZeros), FormatError);
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  auto cfg = grad_check_config();
  cfg.rope_theta = 12345.678901234567;
  cfg.dropout_rate = 0.1;
  auto ckpt = build_model(cfg, 12);
  ckpt.training_step = 99;
  ckpt.provenance = "unit test\nwith newline";
  ckpt.optimizer_state = zeros_like(ckpt.parameters);
  ckpt.optimizer_state->at("final_norm").values[3] = -0.0;
  ckpt.optimizer_state->at("final_norm").values[4] = 1e-310;  // subnormal
  std::stringstream buf;
  write_checkpoint(buf, ckpt);
  const auto back = read_checkpoint(buf);
  EXPECT_EQ(back, ckpt);
  EXPECT_TRUE(std::signbit(back.optimizer_state->at("final_norm").values[3]));
  std::stringstream again;
  write_checkpoint(again, back);
  std::stringstream first;
  write_checkpoint(first, ckpt);
  EXPECT_EQ(again.str(), first.str());
}

TEST(CheckpointTest, Float32Storage) {
  const auto ckpt = build_model(grad_check_config(), 12);
  std::stringstream buf;
  write_checkpoint(buf, ckpt, DType::kFloat32);
  const auto back = read_checkpoint(buf);
  for (const auto& [name, arr] : ckpt.parameters) {
    for (std::size_t i = 0; i < arr.numel(); ++i) {
      EXPECT_EQ(back.parameters.at(name).values[i],
                static_cast<double>(static_cast<float>(arr.values[i])));
    }
  }
}

TEST(CheckpointTest, MalformedInputs) {
  std::stringstream bad_magic("NOTACKPT....");
  EXPECT_THROW(read_checkpoint(bad_magic), FormatError);

  auto ckpt = build_model(grad_check_config(), 1);
  std::stringstream full;
  write_checkpoint(full, ckpt);
  std::stringstream truncated(full.str().substr(0, full.str().size() / 2));
  EXPECT_THROW(read_checkpoint(truncated), FormatError);

  ckpt.parameters.erase("final_norm");
  std::stringstream missing;
  write_checkpoint(missing, ckpt);
  EXPECT_THROW(read_checkpoint(missing), FormatError);
}

TEST(CheckpointTest, ConfigTextRoundTrip) {
  auto cfg = unit_lm_config(500, 64, 2, 4, 256, 1024);
  cfg.rope_theta = 10000.0;
  EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
  EXPECT_THROW(parse_config("bogus=1\n"), FormatError);
}

}  // namespace
}  // namespace slam::model
