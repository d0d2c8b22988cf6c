// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace slam {

using Token = std::uint32_t;
using TokenSeq = std::vector<Token>;

// Row-major [rows x cols] matrix of token ids.
struct TokenMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Token> data;

  TokenMatrix() = default;
  TokenMatrix(std::size_t r, std::size_t c, Token fill = 0)
      : rows(r), cols(c), data(r * c, fill) {}

  std::span<Token> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const Token> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
  Token& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Token at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool operator==(const TokenMatrix&) const = default;
};

// Row-major boolean mask; 1 = position participates in the loss.
struct TokenMask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;

  TokenMask() = default;
  TokenMask(std::size_t r, std::size_t c, std::uint8_t fill = 1)
      : rows(r), cols(c), data(r * c, fill) {}

  std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  std::span<const std::uint8_t> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }

  bool operator==(const TokenMask&) const = default;
};

}  // namespace slam
