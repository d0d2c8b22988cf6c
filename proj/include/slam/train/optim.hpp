// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "slam/model/array.hpp"

namespace slam::train {

struct AdamWHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

// Optimizer state keys: "adam.m.<param>", "adam.v.<param>" and "adam.step"
// (shape {1}). Missing entries are created as zeros. A non-finite gradient
// throws NumericError before anything is modified.
void adamw_step(model::NamedArrays& params, const model::NamedArrays& grads,
                model::NamedArrays& state, double lr, const AdamWHyper& hyper);

double global_grad_norm(const model::NamedArrays& grads);

// Scales every gradient by max_norm/norm when norm > max_norm. Returns the
// norm before clipping. Throws NumericError on a non-finite norm.
double clip_grad_norm(model::NamedArrays& grads, double max_norm);

}  // namespace slam::train
