// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "slam/model/config.hpp"

namespace slam::model {

// Scalar parameters declared by the layer recipe.
std::uint64_t param_count(const ModelConfig& config);

// Parameters in one transformer block.
std::uint64_t block_param_count(const ModelConfig& config);

// Theoretical training compute, 6 * N * D.
double flops_estimate(std::uint64_t n_params, std::uint64_t n_tokens);

}  // namespace slam::model
