// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace slam {

using Rng = std::mt19937_64;

// Derives an independent generator for a named purpose from the single run
// seed, so that adding a consumer never shifts the stream of another one.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x5157u};
  return Rng(seq);
}

// Stream ids. Fixed values, never reorder.
namespace streams {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kDropout = 2;
inline constexpr std::uint64_t kBatching = 3;
inline constexpr std::uint64_t kInterleave = 4;
inline constexpr std::uint64_t kSynth = 5;
inline constexpr std::uint64_t kPreference = 6;
inline constexpr std::uint64_t kSampling = 7;
inline constexpr std::uint64_t kDpoOrder = 8;
}  // namespace streams

}  // namespace slam
