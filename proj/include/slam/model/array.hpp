// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace slam::model {

// Dense row-major array of doubles with an explicit shape.
struct Array {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Array() = default;
  explicit Array(std::vector<std::size_t> s, double fill = 0.0)
      : shape(std::move(s)), values(count(shape), fill) {}

  std::size_t numel() const { return values.size(); }

  static std::size_t count(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1},
                           std::multiplies<>());
  }

  bool operator==(const Array&) const = default;
};

using NamedArrays = std::map<std::string, Array>;

// Zero-filled arrays with the same names and shapes as `like`.
NamedArrays zeros_like(const NamedArrays& like);

}  // namespace slam::model
