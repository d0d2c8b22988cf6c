// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slam/data/batching.hpp"
#include "slam/data/interleave.hpp"
#include "slam/data/packing.hpp"
#include "slam/data/preference.hpp"
#include "slam/dpo/dpo.hpp"
#include "slam/eval/auto_bleu.hpp"
#include "slam/eval/pairs.hpp"
#include "slam/model/accounting.hpp"
#include "slam/model/likelihood.hpp"
#include "slam/model/sampling.hpp"
#include "slam/model/surgery.hpp"
#include "slam/model/transformer.hpp"
#include "slam/recipe.hpp"
#include "slam/train/budget.hpp"
#include "slam/train/recipe.hpp"
#include "slam/train/trainer.hpp"
#include "support/grad_check.hpp"
#include "support/scenarios.hpp"
#include "support/toy.hpp"

namespace slam {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 -------------------------------------------------------------------------
void gradient_oracle(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (bool tied : {false, true}) {
    const auto cfg = testing::grad_check_config(tied);
    o.check(model::param_count(cfg) <= 10000, "model has at most 10k parameters");
    auto ckpt = model::build_model(cfg, 31);
    Rng rng = make_rng(77);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    for (auto& [name, arr] : ckpt.parameters) {
      if (arr.shape.size() == 1) for (auto& v : arr.values) v = jitter(rng);
    }
    const auto inputs = testing::random_tokens(2, 7, cfg.vocab_size, 3);
    const auto targets = testing::random_tokens(2, 7, cfg.vocab_size, 4);
    const TokenMask mask(2, 7, 1);
    model::TrainingPass pass(ckpt, inputs, std::nullopt);
    const auto lg = model::nll_loss_with_grad(pass.logits(), targets, mask);
    auto analytic = model::zeros_like(ckpt.parameters);
    pass.backward(lg.dlogits, analytic);
    const auto numeric = testing::numeric_gradients(ckpt, [&] {
      model::TrainingPass p(ckpt, inputs, std::nullopt);
      return model::nll_loss(p.logits(), targets, mask);
    });
    for (const auto& [name, err] : testing::compare_gradients(analytic, numeric)) {
      worst = std::max(worst, err.relative_error);
      o.check(err.relative_error < 1e-4, name + (tied ? " (tied)" : " (untied)"));
    }
  }
  const double secs = seconds_since(t0);
  o.check(secs < 120.0, "runtime under 2 min");
  o.detail << "worst group relative error " << worst << ", " << secs << " s";
}

// 2 -------------------------------------------------------------------------
void overfit_smoke(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  auto s = testing::cycle_overfit_setup(2000);
  data::BalancedBatcher batches({s.packed}, s.recipe.per_device_batch * 17, 1);
  train::BudgetClock budget({std::nullopt, 2000, std::nullopt});
  train::TrainHooks hooks;
  hooks.validation = s.packed.get();
  const auto out = train::train(s.checkpoint, batches, s.recipe, budget, hooks);
  const double nll = train::validation_loss(out.checkpoint, *s.packed);
  const double secs = seconds_since(t0);
  o.check(out.log.steps.size() <= 2000, "at most 2000 steps");
  o.check(nll < 0.05, "NLL below 0.05");
  o.check(secs < 300.0, "runtime under 5 min");
  o.detail << "NLL " << nll << " after " << out.log.steps.size() << " steps, " << secs << " s";
}

// 3 -------------------------------------------------------------------------
void scheduler_exactness(Outcome& o) {
  const auto shipped = load_recipe(std::string(SLAM_CONFIG_DIR) + "/slam_pretrain.ini");
  const auto& r = shipped.train;
  const double at_warmup = train::lr_at(r.warmup_steps(), r);
  const double at_end = train::lr_at(r.total_steps, r);
  o.check(std::abs(at_warmup - 1e-3) <= 1e-12, "lr at warmup end is 1e-3");
  o.check(std::abs(at_end - 5e-5) <= 1e-12, "lr at final step is 5e-5");
  // Same peak and floor on a step count whose cosine midpoint is an integer.
  auto mid = r;
  mid.total_steps = 20000;  // warmup 200, midpoint 10100
  const double at_mid = train::lr_at(10100, mid);
  o.check(std::abs(at_mid - 5.25e-4) <= 1e-12, "cosine midpoint is 5.25e-4");
  o.detail << "warmup end " << at_warmup << " (step " << r.warmup_steps() << "), final "
           << at_end << " (step " << r.total_steps << "), midpoint " << at_mid;
}

// 4 -------------------------------------------------------------------------
void flops_accounting(Outcome& o) {
  const double f = model::flops_estimate(358347904ull, 1400000000ull);
  o.check(f == 3.0101223936e18, "6*N*D for N=358,347,904, D=1.4e9");
  auto s = testing::cycle_overfit_setup(100);
  data::BalancedBatcher batches({s.packed}, s.recipe.per_device_batch * 17, 1);
  train::BudgetClock budget({std::nullopt, 100, std::nullopt});
  const auto out = train::train(s.checkpoint, batches, s.recipe, budget);
  const std::uint64_t n = model::param_count(s.checkpoint.config);
  o.check(out.log.steps.size() == 100, "100 steps logged");
  std::uint64_t tokens = 0;
  for (const auto& rec : out.log.steps) {
    tokens += s.recipe.per_device_batch * s.recipe.grad_accum_steps * 17;
    if (rec.tokens_seen != tokens) {
      o.check(false, "tokens at step " + std::to_string(rec.step));
      break;
    }
    const std::uint64_t exact = 6ull * n * tokens;  // fits in 64 bits at toy scale
    if (rec.cumulative_flops != static_cast<double>(exact)) {
      o.check(false, "flops at step " + std::to_string(rec.step));
      break;
    }
  }
  o.detail << "flops_estimate " << f << "; 100-step toy log ends at " << tokens << " tokens, "
           << (out.log.steps.empty() ? 0.0 : out.log.steps.back().cumulative_flops) << " FLOPs";
}

// 5 -------------------------------------------------------------------------
void dpo_identities(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  dpo::DPOConfig cfg;
  cfg.optim.peak_lr = cfg.optim.min_lr = 3e-3;
  cfg.optim.scheduler = train::Scheduler::kCosineWithMin;
  cfg.optim.per_device_batch = 4;
  cfg.optim.grad_accum_steps = 2;
  cfg.optim.total_steps = 200;
  cfg.optim.context_length = 32;
  cfg.seed = 2;

  auto s = testing::separable_preferences(64);
  const auto policy = model::build_model(s.config, 5);
  train::BudgetClock budget({std::nullopt, 200, std::nullopt});
  const auto out = dpo::dpo_train(policy, s.records, cfg, budget);
  const double first = out.log.steps.empty() ? -1.0 : out.log.steps.front().loss;
  o.check(std::abs(first - std::log(2.0)) <= 1e-6, "first loss equals ln 2");

  bool exact = true;
  for (double m : {-7.0, -0.5, 0.25, 3.0}) {
    for (double beta : {0.05, 0.1, 1.0}) {
      for (double c : {0.25, 2.0, 8.0}) {
        // Policy margin m against a zero reference margin, scaled by c.
        exact &= dpo::dpo_loss(m, 0.0, 0.0, 0.0, beta) ==
                 dpo::dpo_loss(m / c, 0.0, 0.0, 0.0, beta * c);
      }
    }
  }
  o.check(exact, "beta/margin rescaling is exact");
  const double before = dpo::preference_accuracy(policy, s.records);
  const double after = dpo::preference_accuracy(out.checkpoint, s.records);
  const double secs = seconds_since(t0);
  o.check(out.log.steps.size() <= 200, "at most 200 steps");
  o.check(after > 0.9, "preference accuracy above 0.9");
  o.check(secs < 300.0, "runtime under 5 min");
  o.detail << "first loss " << first << ", accuracy " << before << " -> " << after << " in "
           << out.log.steps.size() << " steps, " << secs << " s";
}

// 6 -------------------------------------------------------------------------
data::AlignedPair random_pair(std::size_t n_units, Rng& rng) {
  data::AlignedPair p;
  std::uniform_int_distribution<std::size_t> sp_len(2, 3);
  std::uniform_int_distribution<Token> sp_tok(0, 99), tx_tok(100, 199);
  for (std::size_t u = 0; u < n_units; ++u) {
    data::AlignmentUnit a;
    a.speech_begin = p.speech_tokens.size();
    a.text_begin = p.text_tokens.size();
    const std::size_t k = sp_len(rng);
    for (std::size_t i = 0; i < k; ++i) p.speech_tokens.push_back(sp_tok(rng));
    p.text_tokens.push_back(tx_tok(rng));
    a.speech_end = p.speech_tokens.size();
    a.text_end = p.text_tokens.size();
    p.alignment.push_back(a);
  }
  return p;
}

void interleave_statistics(Outcome& o) {
  data::InterleaveConfig cfg;
  cfg.span_length_mean = 10.0;
  cfg.speech_fraction = 0.3;
  cfg.begin_speech = 200;
  cfg.begin_text = 201;
  cfg.seed = 99;
  Rng rng(8);
  std::uniform_int_distribution<std::size_t> units(1000, 2000);
  double span_units = 0.0, spans = 0.0, speech = 0.0, total = 0.0;
  bool markers_match = true;
  for (int doc = 0; doc < 10000; ++doc) {
    const auto pair = random_pair(units(rng), rng);
    const auto d = data::build_interleaved_detailed(pair, cfg, static_cast<std::uint64_t>(doc));
    for (const auto& sp : d.speech_spans) span_units += static_cast<double>(sp.size());
    spans += static_cast<double>(d.speech_spans.size());
    speech += static_cast<double>(d.speech_tokens);
    total += static_cast<double>(d.speech_tokens + d.text_tokens);
    const auto marker_count = static_cast<std::size_t>(std::count_if(
        d.tokens.begin(), d.tokens.end(), [](Token t) { return t == 200 || t == 201; }));
    markers_match &= marker_count == d.markers && d.markers == d.modality_switches;
  }
  const double mean_span = span_units / spans;
  const double share = speech / total;
  o.check(mean_span >= 9.5 && mean_span <= 10.5, "mean span length in [9.5, 10.5]");
  o.check(share >= 0.28 && share <= 0.32, "speech share in [0.28, 0.32]");
  o.check(markers_match, "marker count equals modality switches");
  o.detail << "10000 docs of 1000-2000 units: realized mean span " << mean_span
           << " units, speech share " << share;
}

// 7 -------------------------------------------------------------------------
void auto_bleu_cases(Outcome& o) {
  o.check(eval::auto_bleu(TokenSeq{4, 4, 4, 4, 4}) == 1.0, "all-repeat is 1");
  o.check(eval::auto_bleu(TokenSeq{1, 2, 3, 4}) == 0.0, "all-distinct is 0");
  o.check(eval::auto_bleu(TokenSeq{1, 2, 1, 2, 3}) == 0.5, "[a,b,a,b,c] is 0.5");
  auto rec = [](TokenSeq chosen, TokenSeq rejected) {
    return data::PreferenceRecord{{0}, std::move(chosen), std::move(rejected)};
  };
  const std::vector<data::PreferenceRecord> records = {
      rec({1, 1, 1, 1, 1}, {1, 2, 3}),
      rec({1, 2, 3, 4}, {5, 6, 7, 8}),
      rec({1, 2, 1, 2, 3}, {4, 5}),
      rec({1, 2, 3, 1, 2, 4, 5, 6, 7, 8}, {3, 4, 5}),
      rec({1, 2, 3}, {7, 7, 7}),
      rec({5}, {6}),
      rec({1, 2, 3, 1, 2, 3, 4, 5, 6, 7}, {1, 9}),
      rec({1, 2, 1, 3, 4, 5, 6, 7}, {9, 8, 9, 8, 10, 11, 12, 13, 14, 15, 16}),
      rec({1, 2, 3, 1, 2, 4, 1, 2, 5, 6, 7}, {2, 3}),
      rec({4, 4}, {1, 2, 3, 4, 1, 2}),
  };
  const auto kept = data::filter_by_auto_bleu(records, 0.3);
  const std::vector<data::PreferenceRecord> expected = {records[1], records[3], records[5],
                                                        records[7], records[8]};
  o.check(kept == expected, "filter keeps records 1, 3, 5, 7, 8");
  o.detail << "filter kept " << kept.size() << " of 10";
}

// 8 -------------------------------------------------------------------------
void sampling_contract(Outcome& o) {
  std::vector<double> logits{2.0, -2.0, 0.5};
  model::apply_repetition_penalty(logits, TokenSeq{0, 1}, 1.1);
  o.check(logits[0] == 2.0 / 1.1, "2.0 -> 2.0/1.1");
  o.check(std::abs(logits[1] - (-2.2)) <= 1e-15, "-2.0 -> -2.2");
  o.check(logits[2] == 0.5, "unseen token untouched");

  const auto ckpt = model::build_model(model::unit_lm_config(12, 16, 1, 2, 32, 16), 4);
  model::SamplingConfig greedy;
  greedy.top_k = 1;
  greedy.max_new_tokens = 30;
  const TokenSeq prompt{3, 1, 4};
  const auto g0 = model::generate(ckpt, prompt, greedy);
  bool same = true;
  for (std::uint64_t seed = 1; seed < 6; ++seed) {
    greedy.seed = seed;
    same &= model::generate(ckpt, prompt, greedy) == g0;
  }
  o.check(same, "top_k=1 ignores the seed");
  model::SamplingConfig sampled;
  sampled.seed = 11;
  o.check(model::generate(ckpt, prompt, sampled) == model::generate(ckpt, prompt, sampled),
          "fixed-seed generation repeats");
  o.detail << "penalized logits " << logits[0] << ", " << logits[1];
}

// 9 -------------------------------------------------------------------------
void packing_conservation(Outcome& o) {
  Rng rng(12345);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_int_distribution<std::size_t> n_docs(0, 12), len(1, 40), ctx(2, 33);
    std::uniform_int_distribution<Token> tok(0, 49);
    data::UnitCorpus c;
    c.vocab_size = 50;
    std::size_t total = 0;
    const std::size_t n = n_docs(rng);
    for (std::size_t d = 0; d < n; ++d) {
      TokenSeq doc(len(rng));
      for (auto& t : doc) t = tok(rng);
      total += doc.size();
      c.documents.push_back(std::move(doc));
    }
    data::PackOptions po;
    po.context_length = ctx(rng);
    po.sep_token = 50;
    po.pad_token = 51;
    po.model_vocab_size = 52;
    const auto p = data::pack(c, po);
    const std::size_t C = po.context_length;
    bool ok = p.chunks.cols == C && p.chunks.data.size() == p.size() * C;
    std::size_t content = 0;
    for (std::size_t r = 0; r < p.size() && ok; ++r) {
      if (r + 1 < p.size()) ok &= p.valid_lengths[r] == C;
      for (std::size_t i = 0; i < C; ++i) {
        const Token t = p.chunks.at(r, i);
        if (i >= p.valid_lengths[r]) ok &= t == 51;
        else if (t != 50) ++content;
      }
    }
    ok &= content == total && p.size() == (total + n + C - 1) / C && data::unpack(p) == c.documents;
    failures += ok ? 0 : 1;
  }
  o.check(failures == 0, "every randomized corpus conserves tokens");
  o.detail << "1000 cases, " << failures << " violations";
}

// 10 ------------------------------------------------------------------------
void pairwise_calibration(Outcome& o) {
  const auto ckpt = model::build_model(model::unit_lm_config(12, 16, 1, 2, 32, 32), 9);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Token> tok(0, 11);
  std::uniform_int_distribution<std::size_t> len(2, 8);
  std::vector<eval::LikelihoodPair> pairs, identical;
  for (int i = 0; i < 2000; ++i) {
    eval::LikelihoodPair p;
    const std::size_t l = len(rng);
    for (std::size_t k = 0; k < l; ++k) p.positive.push_back(tok(rng));
    for (std::size_t k = 0; k < l; ++k) p.negative.push_back(tok(rng));
    p.tag = "random";
    pairs.push_back(p);
    p.negative = p.positive;
    identical.push_back(std::move(p));
  }
  const double acc = eval::pairwise_accuracy(ckpt, pairs).accuracy();
  const double same = eval::pairwise_accuracy(ckpt, identical).accuracy();
  o.check(std::abs(acc - 0.5) <= 0.03, "random pairs within 0.5 +- 0.03");
  o.check(same == 0.5, "identical members exactly 0.5");
  o.detail << "random pairs " << acc << ", identical " << same;
}

// 11 ------------------------------------------------------------------------
void budget_discipline(Outcome& o) {
  {
    auto s = testing::cycle_overfit_setup();
    data::BalancedBatcher batches({s.packed}, 8 * 17, 1);
    train::BudgetClock budget({std::nullopt, 7, std::nullopt});
    const auto out = train::train(s.checkpoint, batches, s.recipe, budget);
    o.check(out.log.steps.size() == 7 && out.checkpoint.training_step == 7 &&
                budget.steps() == 7,
            "no step after the step limit");
  }
  {
    auto s = testing::cycle_overfit_setup();
    data::BalancedBatcher batches({s.packed}, 8 * 17, 1);
    auto clock = std::make_shared<train::ManualClock>();
    train::BudgetClock budget({3.5, std::nullopt, std::nullopt}, clock);
    train::TrainHooks hooks;
    hooks.on_step = [&](const train::StepRecord&) { clock->advance(1.0); };
    const auto out = train::train(s.checkpoint, batches, s.recipe, budget, hooks);
    o.check(out.log.stop_reason == "wall_clock" && budget.elapsed_seconds() <= 3.5 + 1.0,
            "wall clock honored within one step");
  }
  const auto [pre, post] = train::split_budget(24.0 * 3600.0, 1.0 / 48.0);
  o.check(pre == 23.5 * 3600.0 && post == 0.5 * 3600.0, "split_budget(24h, 1/48)");
  o.detail << "split " << pre / 3600.0 << " h + " << post / 3600.0 << " h";
}

// 12 ------------------------------------------------------------------------
void vocabulary_surgery(Outcome& o) {
  for (bool tied : {false, true}) {
    auto cfg = testing::reference_toy_config();
    cfg.vocab_size = 1000;
    cfg.tie_embeddings = tied;
    const auto src = model::build_model(cfg, 1);
    const auto out =
        model::resize_vocabulary(src, 504, {}, model::EmbeddingInit::kNormalMatchedStd, 3);
    bool body = true;
    for (const auto& [name, arr] : src.parameters) {
      if (name == "tok_embedding" || name == "lm_head") continue;
      body &= out.parameters.at(name) == arr;
    }
    o.check(body, tied ? "tied body bit-identical" : "body bit-identical");
    const std::uint64_t delta = model::param_count(src.config) - model::param_count(out.config);
    const std::uint64_t expected = (tied ? 1u : 2u) * (1000u - 504u) * cfg.model_dim;
    o.check(delta == expected, tied ? "tied count delta" : "count delta");
    o.detail << (tied ? "tied" : "untied") << " delta " << delta << "; ";
  }
}

}  // namespace
}  // namespace slam

int main() {
  const std::vector<std::pair<const char*, std::function<void(slam::Outcome&)>>> criteria = {
      {"gradient oracle", slam::gradient_oracle},
      {"overfit smoke", slam::overfit_smoke},
      {"scheduler exactness", slam::scheduler_exactness},
      {"FLOPs accounting", slam::flops_accounting},
      {"DPO identities", slam::dpo_identities},
      {"interleaving statistics", slam::interleave_statistics},
      {"auto-BLEU exact cases", slam::auto_bleu_cases},
      {"sampling contract", slam::sampling_contract},
      {"packing conservation", slam::packing_conservation},
      {"pairwise metric calibration", slam::pairwise_calibration},
      {"budget discipline", slam::budget_discipline},
      {"vocabulary surgery", slam::vocabulary_surgery},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    slam::Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
