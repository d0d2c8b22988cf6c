// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pre-norm decoder-only transformer with a hand-written backward pass.
//
// Per block:  h = RMSNorm(x);  x += Wo * Attn(RoPE(h Wq), RoPE(h Wk), h Wv)
//             h = RMSNorm(x);  x += GELU(h W_up) W_down
// Output:     logits = RMSNorm(x) W_head     (W_head = E^T when tied)
//
// No bias terms anywhere. Attention is causal with 1/sqrt(head_dim) scaling.

#include "slam/model/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kernels.hpp"
#include "slam/error.hpp"
#include "slam/model/rope.hpp"
#include "slam/random.hpp"

namespace slam::model {

namespace {

struct LayerWeights {
  const double* attn_norm;
  const double* wq;
  const double* wk;
  const double* wv;
  const double* wo;
  const double* ffn_norm;
  const double* w_up;
  const double* w_down;
};

struct ModelView {
  const ModelConfig* cfg;
  const double* embedding;
  std::vector<LayerWeights> layers;
  const double* final_norm;
  const double* head;  // [D x V]; nullptr when tied
};

const double* param_ptr(const NamedArrays& params, const std::string& name) {
  return params.at(name).values.data();
}

ModelView make_view(const Checkpoint& ckpt) {
  validate_checkpoint(ckpt);
  const auto& p = ckpt.parameters;
  ModelView view;
  view.cfg = &ckpt.config;
  view.embedding = param_ptr(p, "tok_embedding");
  for (std::size_t l = 0; l < ckpt.config.n_layers; ++l) {
    const std::string pre = "layers." + std::to_string(l) + ".";
    view.layers.push_back({param_ptr(p, pre + "attn_norm"), param_ptr(p, pre + "wq"),
                           param_ptr(p, pre + "wk"), param_ptr(p, pre + "wv"),
                           param_ptr(p, pre + "wo"), param_ptr(p, pre + "ffn_norm"),
                           param_ptr(p, pre + "w_up"), param_ptr(p, pre + "w_down")});
  }
  view.final_norm = param_ptr(p, "final_norm");
  view.head = ckpt.config.tie_embeddings ? nullptr : param_ptr(p, "lm_head");
  return view;
}

void check_batch(const ModelConfig& cfg, const TokenMatrix& batch) {
  if (batch.cols > cfg.context_length) {
    throw InputError("sequence length " + std::to_string(batch.cols) +
                     " exceeds context length " + std::to_string(cfg.context_length));
  }
  if (batch.cols == 0) throw InputError("empty sequence");
  for (std::size_t i = 0; i < batch.data.size(); ++i) {
    if (batch.data[i] >= cfg.vocab_size) {
      throw InputError("token id " + std::to_string(batch.data[i]) + " at row " +
                       std::to_string(i / batch.cols) + " is outside the vocabulary of " +
                       std::to_string(cfg.vocab_size));
    }
  }
}

struct LayerCache {
  std::vector<double> x_in, inv_rms1, h1, q, k, v, probs, att, x_mid, inv_rms2, h2, u, a;
  std::vector<double> drop_attn, drop_ffn;  // empty when dropout is off
};

struct SequenceCache {
  std::vector<Token> tokens;
  std::vector<LayerCache> layers;
  std::vector<double> x_out, inv_rms_f, hf;
};

// Inverted-dropout mask: each entry 0 or 1/(1-p); all zeros when p == 1.
std::vector<double> dropout_mask(std::size_t n, double p, Rng& rng) {
  std::vector<double> mask(n);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double keep_scale = p < 1.0 ? 1.0 / (1.0 - p) : 0.0;
  for (auto& m : mask) m = uni(rng) < p ? 0.0 : keep_scale;
  return mask;
}

void causal_attention(const ModelConfig& cfg, std::size_t T, const double* q, const double* k,
                      const double* v, double* probs, double* att) {
  const std::size_t H = cfg.n_heads;
  const std::size_t hd = cfg.head_dim();
  const std::size_t D = cfg.model_dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  std::fill(att, att + T * D, 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t t = 0; t < T; ++t) {
      double* prow = probs + (h * T + t) * T;
      const double* qt = q + t * D + h * hd;
      double mx = -INFINITY;
      for (std::size_t s = 0; s <= t; ++s) {
        const double* ks = k + s * D + h * hd;
        double dot = 0.0;
        for (std::size_t i = 0; i < hd; ++i) dot += qt[i] * ks[i];
        prow[s] = dot * scale;
        mx = std::max(mx, prow[s]);
      }
      double sum = 0.0;
      for (std::size_t s = 0; s <= t; ++s) {
        prow[s] = std::exp(prow[s] - mx);
        sum += prow[s];
      }
      for (std::size_t s = 0; s <= t; ++s) prow[s] /= sum;
      for (std::size_t s = t + 1; s < T; ++s) prow[s] = 0.0;
      double* out = att + t * D + h * hd;
      for (std::size_t s = 0; s <= t; ++s) {
        const double* vs = v + s * D + h * hd;
        const double w = prow[s];
        for (std::size_t i = 0; i < hd; ++i) out[i] += w * vs[i];
      }
    }
  }
}

void causal_attention_backward(const ModelConfig& cfg, std::size_t T, const double* q,
                               const double* k, const double* v, const double* probs,
                               const double* datt, double* dq, double* dk, double* dv) {
  const std::size_t H = cfg.n_heads;
  const std::size_t hd = cfg.head_dim();
  const std::size_t D = cfg.model_dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
  std::fill(dq, dq + T * D, 0.0);
  std::fill(dk, dk + T * D, 0.0);
  std::fill(dv, dv + T * D, 0.0);
  std::vector<double> dp(T);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t t = 0; t < T; ++t) {
      const double* prow = probs + (h * T + t) * T;
      const double* dout = datt + t * D + h * hd;
      double weighted = 0.0;
      for (std::size_t s = 0; s <= t; ++s) {
        const double* vs = v + s * D + h * hd;
        double* dvs = dv + s * D + h * hd;
        double dot = 0.0;
        for (std::size_t i = 0; i < hd; ++i) {
          dot += dout[i] * vs[i];
          dvs[i] += prow[s] * dout[i];
        }
        dp[s] = dot;
        weighted += prow[s] * dot;
      }
      const double* qt = q + t * D + h * hd;
      double* dqt = dq + t * D + h * hd;
      for (std::size_t s = 0; s <= t; ++s) {
        const double ds = prow[s] * (dp[s] - weighted) * scale;
        if (ds == 0.0) continue;
        const double* ks = k + s * D + h * hd;
        double* dks = dk + s * D + h * hd;
        for (std::size_t i = 0; i < hd; ++i) {
          dqt[i] += ds * ks[i];
          dks[i] += ds * qt[i];
        }
      }
    }
  }
}

// Forward over one sequence. When `cache` is non-null every activation the
// backward pass needs is kept there.
void forward_sequence(const ModelView& m, std::span<const Token> tokens, double* logits,
                      SequenceCache* cache, Rng* dropout_rng) {
  const ModelConfig& cfg = *m.cfg;
  const std::size_t T = tokens.size();
  const std::size_t D = cfg.model_dim;
  const std::size_t F = cfg.ffn_dim;
  const std::size_t V = cfg.vocab_size;
  const std::size_t H = cfg.n_heads;
  const bool use_dropout = dropout_rng != nullptr && cfg.dropout_rate > 0.0;

  std::vector<std::size_t> positions(T);
  std::iota(positions.begin(), positions.end(), std::size_t{0});

  std::vector<double> x(T * D);
  for (std::size_t t = 0; t < T; ++t) {
    std::copy_n(m.embedding + tokens[t] * D, D, x.begin() + t * D);
  }

  LayerCache scratch;
  if (cache) {
    cache->tokens.assign(tokens.begin(), tokens.end());
    cache->layers.assign(cfg.n_layers, {});
  }
  std::vector<double> tmp(T * D);

  for (std::size_t l = 0; l < cfg.n_layers; ++l) {
    const LayerWeights& w = m.layers[l];
    LayerCache& c = cache ? cache->layers[l] : scratch;
    c.x_in = x;
    c.inv_rms1.resize(T);
    c.h1.resize(T * D);
    kernels::rms_norm(x.data(), w.attn_norm, c.h1.data(), c.inv_rms1.data(), T, D);
    c.q.resize(T * D);
    c.k.resize(T * D);
    c.v.resize(T * D);
    kernels::matmul(c.h1.data(), w.wq, c.q.data(), T, D, D);
    kernels::matmul(c.h1.data(), w.wk, c.k.data(), T, D, D);
    kernels::matmul(c.h1.data(), w.wv, c.v.data(), T, D, D);
    rope_apply_inplace<double>(c.q, H, cfg.head_dim(), positions, cfg.rope_theta);
    rope_apply_inplace<double>(c.k, H, cfg.head_dim(), positions, cfg.rope_theta);
    c.probs.resize(H * T * T);
    c.att.resize(T * D);
    causal_attention(cfg, T, c.q.data(), c.k.data(), c.v.data(), c.probs.data(), c.att.data());
    kernels::matmul(c.att.data(), w.wo, tmp.data(), T, D, D);
    if (use_dropout) {
      c.drop_attn = dropout_mask(T * D, cfg.dropout_rate, *dropout_rng);
      for (std::size_t i = 0; i < T * D; ++i) tmp[i] *= c.drop_attn[i];
    }
    for (std::size_t i = 0; i < T * D; ++i) x[i] += tmp[i];

    c.x_mid = x;
    c.inv_rms2.resize(T);
    c.h2.resize(T * D);
    kernels::rms_norm(x.data(), w.ffn_norm, c.h2.data(), c.inv_rms2.data(), T, D);
    c.u.resize(T * F);
    c.a.resize(T * F);
    kernels::matmul(c.h2.data(), w.w_up, c.u.data(), T, D, F);
    for (std::size_t i = 0; i < T * F; ++i) c.a[i] = kernels::gelu(c.u[i]);
    kernels::matmul(c.a.data(), w.w_down, tmp.data(), T, F, D);
    if (use_dropout) {
      c.drop_ffn = dropout_mask(T * D, cfg.dropout_rate, *dropout_rng);
      for (std::size_t i = 0; i < T * D; ++i) tmp[i] *= c.drop_ffn[i];
    }
    for (std::size_t i = 0; i < T * D; ++i) x[i] += tmp[i];
  }

  std::vector<double> inv_rms_f(T);
  std::vector<double> hf(T * D);
  kernels::rms_norm(x.data(), m.final_norm, hf.data(), inv_rms_f.data(), T, D);
  if (m.head) {
    kernels::matmul(hf.data(), m.head, logits, T, D, V);
  } else {
    kernels::matmul_nt(hf.data(), m.embedding, logits, T, V, D, false);
  }
  if (cache) {
    cache->x_out = std::move(x);
    cache->inv_rms_f = std::move(inv_rms_f);
    cache->hf = std::move(hf);
  }
}

struct GradView {
  double* embedding;
  double* final_norm;
  double* head;
  struct Layer {
    double *attn_norm, *wq, *wk, *wv, *wo, *ffn_norm, *w_up, *w_down;
  };
  std::vector<Layer> layers;
};

double* grad_ptr(NamedArrays& grads, const std::string& name, std::size_t expected) {
  auto it = grads.find(name);
  if (it == grads.end() || it->second.numel() != expected) {
    throw InputError("gradient buffer for '" + name + "' is missing or mis-shaped");
  }
  return it->second.values.data();
}

GradView make_grad_view(const ModelConfig& cfg, NamedArrays& grads) {
  const std::size_t D = cfg.model_dim;
  const std::size_t F = cfg.ffn_dim;
  GradView g;
  g.embedding = grad_ptr(grads, "tok_embedding", cfg.vocab_size * D);
  g.final_norm = grad_ptr(grads, "final_norm", D);
  g.head = cfg.tie_embeddings ? nullptr : grad_ptr(grads, "lm_head", D * cfg.vocab_size);
  for (std::size_t l = 0; l < cfg.n_layers; ++l) {
    const std::string pre = "layers." + std::to_string(l) + ".";
    g.layers.push_back({grad_ptr(grads, pre + "attn_norm", D), grad_ptr(grads, pre + "wq", D * D),
                        grad_ptr(grads, pre + "wk", D * D), grad_ptr(grads, pre + "wv", D * D),
                        grad_ptr(grads, pre + "wo", D * D), grad_ptr(grads, pre + "ffn_norm", D),
                        grad_ptr(grads, pre + "w_up", D * F),
                        grad_ptr(grads, pre + "w_down", F * D)});
  }
  return g;
}

void backward_sequence(const ModelView& m, const SequenceCache& c, const double* dlogits,
                       GradView& g) {
  const ModelConfig& cfg = *m.cfg;
  const std::size_t T = c.tokens.size();
  const std::size_t D = cfg.model_dim;
  const std::size_t F = cfg.ffn_dim;
  const std::size_t V = cfg.vocab_size;
  const std::size_t H = cfg.n_heads;

  std::vector<std::size_t> positions(T);
  std::iota(positions.begin(), positions.end(), std::size_t{0});

  std::vector<double> dhf(T * D);
  if (m.head) {
    kernels::matmul_nt(dlogits, m.head, dhf.data(), T, D, V, false);
    kernels::matmul_tn_acc(c.hf.data(), dlogits, g.head, T, D, V);
  } else {
    kernels::matmul(dlogits, m.embedding, dhf.data(), T, V, D);
    kernels::matmul_tn_acc(dlogits, c.hf.data(), g.embedding, T, V, D);
  }
  std::vector<double> dx(T * D, 0.0);
  kernels::rms_norm_backward(c.x_out.data(), m.final_norm, c.inv_rms_f.data(), dhf.data(),
                             dx.data(), g.final_norm, T, D);

  std::vector<double> dbranch(T * D), da(T * F), dh(T * D), datt(T * D);
  std::vector<double> dq(T * D), dk(T * D), dv(T * D);
  for (std::size_t li = cfg.n_layers; li-- > 0;) {
    const LayerWeights& w = m.layers[li];
    const LayerCache& lc = c.layers[li];
    GradView::Layer& gl = g.layers[li];

    // feed-forward branch
    for (std::size_t i = 0; i < T * D; ++i) {
      dbranch[i] = lc.drop_ffn.empty() ? dx[i] : dx[i] * lc.drop_ffn[i];
    }
    kernels::matmul_tn_acc(lc.a.data(), dbranch.data(), gl.w_down, T, F, D);
    kernels::matmul_nt(dbranch.data(), w.w_down, da.data(), T, F, D, false);
    for (std::size_t i = 0; i < T * F; ++i) da[i] *= kernels::gelu_grad(lc.u[i]);
    kernels::matmul_tn_acc(lc.h2.data(), da.data(), gl.w_up, T, D, F);
    kernels::matmul_nt(da.data(), w.w_up, dh.data(), T, D, F, false);
    kernels::rms_norm_backward(lc.x_mid.data(), w.ffn_norm, lc.inv_rms2.data(), dh.data(),
                               dx.data(), gl.ffn_norm, T, D);

    // attention branch
    for (std::size_t i = 0; i < T * D; ++i) {
      dbranch[i] = lc.drop_attn.empty() ? dx[i] : dx[i] * lc.drop_attn[i];
    }
    kernels::matmul_tn_acc(lc.att.data(), dbranch.data(), gl.wo, T, D, D);
    kernels::matmul_nt(dbranch.data(), w.wo, datt.data(), T, D, D, false);
    causal_attention_backward(cfg, T, lc.q.data(), lc.k.data(), lc.v.data(), lc.probs.data(),
                              datt.data(), dq.data(), dk.data(), dv.data());
    rope_apply_inplace<double>(dq, H, cfg.head_dim(), positions, cfg.rope_theta, true);
    rope_apply_inplace<double>(dk, H, cfg.head_dim(), positions, cfg.rope_theta, true);
    kernels::matmul_tn_acc(lc.h1.data(), dq.data(), gl.wq, T, D, D);
    kernels::matmul_tn_acc(lc.h1.data(), dk.data(), gl.wk, T, D, D);
    kernels::matmul_tn_acc(lc.h1.data(), dv.data(), gl.wv, T, D, D);
    kernels::matmul_nt(dq.data(), w.wq, dh.data(), T, D, D, false);
    kernels::matmul_nt(dk.data(), w.wk, dh.data(), T, D, D, true);
    kernels::matmul_nt(dv.data(), w.wv, dh.data(), T, D, D, true);
    kernels::rms_norm_backward(lc.x_in.data(), w.attn_norm, lc.inv_rms1.data(), dh.data(),
                               dx.data(), gl.attn_norm, T, D);
  }

  for (std::size_t t = 0; t < T; ++t) {
    double* row = g.embedding + c.tokens[t] * D;
    for (std::size_t i = 0; i < D; ++i) row[i] += dx[t * D + i];
  }
}

double truncated_normal(Rng& rng, double std) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    const double z = normal(rng);
    if (std::abs(z) <= 2.0) return z * std;
  }
}

}  // namespace

Checkpoint build_model(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Checkpoint ckpt;
  ckpt.config = config;
  Rng rng = make_rng(seed, streams::kInit);
  for (const auto& spec : parameter_specs(config)) {
    Array arr(spec.shape);
    if (spec.shape.size() == 1) {
      std::fill(arr.values.begin(), arr.values.end(), 1.0);
    } else {
      for (auto& v : arr.values) v = truncated_normal(rng, 0.02);
    }
    ckpt.parameters.emplace(spec.name, std::move(arr));
  }
  ckpt.provenance = "build_model seed=" + std::to_string(seed);
  return ckpt;
}

Logits forward(const Checkpoint& ckpt, const TokenMatrix& batch) {
  const ModelView view = make_view(ckpt);
  check_batch(ckpt.config, batch);
  Logits logits(batch.rows, batch.cols, ckpt.config.vocab_size);
  for (std::size_t b = 0; b < batch.rows; ++b) {
    forward_sequence(view, batch.row(b), logits.at(b, 0).data(), nullptr, nullptr);
  }
  return logits;
}

struct TrainingPass::State {
  const Checkpoint* ckpt = nullptr;
  ModelView view;
  std::vector<SequenceCache> caches;
  Logits logits;
};

TrainingPass::TrainingPass(const Checkpoint& ckpt, const TokenMatrix& batch,
                           std::optional<DropoutContext> dropout)
    : state_(std::make_unique<State>()) {
  state_->ckpt = &ckpt;
  state_->view = make_view(ckpt);
  check_batch(ckpt.config, batch);
  state_->logits = Logits(batch.rows, batch.cols, ckpt.config.vocab_size);
  state_->caches.resize(batch.rows);
  std::optional<Rng> rng;
  if (dropout && ckpt.config.dropout_rate > 0.0) {
    rng = make_rng(dropout->seed, streams::kDropout + (dropout->step << 8));
  }
  for (std::size_t b = 0; b < batch.rows; ++b) {
    forward_sequence(state_->view, batch.row(b), state_->logits.at(b, 0).data(),
                     &state_->caches[b], rng ? &*rng : nullptr);
  }
}

TrainingPass::~TrainingPass() = default;
TrainingPass::TrainingPass(TrainingPass&&) noexcept = default;
TrainingPass& TrainingPass::operator=(TrainingPass&&) noexcept = default;

const Logits& TrainingPass::logits() const { return state_->logits; }

void TrainingPass::backward(const Logits& dlogits, NamedArrays& grads) const {
  const Logits& lg = state_->logits;
  if (dlogits.batch != lg.batch || dlogits.time != lg.time || dlogits.vocab != lg.vocab) {
    throw InputError("dlogits shape does not match the forward pass");
  }
  GradView g = make_grad_view(state_->ckpt->config, grads);
  for (std::size_t b = 0; b < lg.batch; ++b) {
    backward_sequence(state_->view, state_->caches[b], dlogits.at(b, 0).data(), g);
  }
}

}  // namespace slam::model
