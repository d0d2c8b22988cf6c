// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "slam/error.hpp"

namespace slam::model {

// Rotary position embedding over an array laid out as [T x heads x head_dim].
// Dimensions (2i, 2i+1) of every head at position p are rotated by the angle
// p * theta^(-2i/head_dim). `inverse` rotates by the negated angle, which is
// the transpose of the forward map and is used in the backward pass.
template <typename Scalar>
void rope_apply_inplace(std::span<Scalar> data, std::size_t heads,
                        std::size_t head_dim, std::span<const std::size_t> positions,
                        double theta, bool inverse = false) {
  if (head_dim % 2 != 0) {
    throw ConfigError("rope: head_dim must be even, got " + std::to_string(head_dim));
  }
  if (!(theta > 0.0)) {
    throw ConfigError("rope: theta must be positive");
  }
  const std::size_t row = heads * head_dim;
  if (data.size() != positions.size() * row) {
    throw InputError("rope: data size does not match positions x heads x head_dim");
  }
  const std::size_t half = head_dim / 2;
  std::vector<double> inv_freq(half);
  for (std::size_t i = 0; i < half; ++i) {
    inv_freq[i] = std::pow(theta, -2.0 * static_cast<double>(i) / static_cast<double>(head_dim));
  }
  const double sign = inverse ? -1.0 : 1.0;
  for (std::size_t t = 0; t < positions.size(); ++t) {
    const double pos = static_cast<double>(positions[t]);
    for (std::size_t i = 0; i < half; ++i) {
      const double angle = sign * pos * inv_freq[i];
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      for (std::size_t h = 0; h < heads; ++h) {
        Scalar* pair = data.data() + t * row + h * head_dim + 2 * i;
        const double x0 = static_cast<double>(pair[0]);
        const double x1 = static_cast<double>(pair[1]);
        pair[0] = static_cast<Scalar>(x0 * c - x1 * s);
        pair[1] = static_cast<Scalar>(x0 * s + x1 * c);
      }
    }
  }
}

template <typename Scalar>
std::vector<Scalar> rope_apply(std::span<const Scalar> data, std::size_t heads,
                               std::size_t head_dim,
                               std::span<const std::size_t> positions, double theta) {
  std::vector<Scalar> out(data.begin(), data.end());
  rope_apply_inplace<Scalar>(out, heads, head_dim, positions, theta);
  return out;
}

}  // namespace slam::model
