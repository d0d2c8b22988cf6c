// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/train/optim.hpp"

#include <cmath>

#include "slam/error.hpp"

namespace slam::train {

void adamw_step(model::NamedArrays& params, const model::NamedArrays& grads,
                model::NamedArrays& state, double lr, const AdamWHyper& h) {
  if (grads.size() != params.size()) throw InputError("adamw: gradient set does not match parameters");
  for (const auto& [name, p] : params) {
    const auto it = grads.find(name);
    if (it == grads.end() || it->second.shape != p.shape) {
      throw InputError("adamw: missing or mis-shaped gradient for '" + name + "'");
    }
    for (double g : it->second.values) {
      if (!std::isfinite(g)) throw NumericError("adamw: non-finite gradient in '" + name + "'");
    }
  }

  auto& step_arr = state.try_emplace("adam.step", model::Array({1})).first->second;
  const double t = step_arr.values[0] + 1.0;
  step_arr.values[0] = t;
  const double c1 = 1.0 - std::pow(h.beta1, t);
  const double c2 = 1.0 - std::pow(h.beta2, t);
  for (auto& [name, p] : params) {
    const auto& g = grads.at(name).values;
    auto& m = state.try_emplace("adam.m." + name, model::Array(p.shape)).first->second.values;
    auto& v = state.try_emplace("adam.v." + name, model::Array(p.shape)).first->second.values;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
      v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g[i] * g[i];
      const double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + h.eps);
      p.values[i] -= lr * h.weight_decay * p.values[i] + lr * update;
    }
  }
}

double global_grad_norm(const model::NamedArrays& grads) {
  double sq = 0.0;
  for (const auto& [name, g] : grads) {
    for (double x : g.values) sq += x * x;
  }
  return std::sqrt(sq);
}

double clip_grad_norm(model::NamedArrays& grads, double max_norm) {
  if (!(max_norm > 0.0)) throw ConfigError("clip_grad_norm: max_norm must be positive");
  const double norm = global_grad_norm(grads);
  if (!std::isfinite(norm)) throw NumericError("clip_grad_norm: gradient norm is not finite");
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& [name, g] : grads) {
      for (double& x : g.values) x *= scale;
    }
  }
  return norm;
}

}  // namespace slam::train
