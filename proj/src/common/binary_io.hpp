// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Little-endian primitives shared by the binary file formats.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "slam/error.hpp"

namespace slam::io {

template <typename UInt>
void write_le(std::ostream& out, UInt value) {
  static_assert(std::is_unsigned_v<UInt>);
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt read_le(std::istream& in, std::string_view what) {
  static_assert(std::is_unsigned_v<UInt>);
  std::array<unsigned char, sizeof(UInt)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) {
    throw FormatError("unexpected end of file while reading " + std::string(what));
  }
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return value;
}

inline void write_f64(std::ostream& out, double v) {
  write_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}
inline double read_f64(std::istream& in, std::string_view what) {
  return std::bit_cast<double>(read_le<std::uint64_t>(in, what));
}
inline void write_f32(std::ostream& out, float v) {
  write_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
}
inline float read_f32(std::istream& in, std::string_view what) {
  return std::bit_cast<float>(read_le<std::uint32_t>(in, what));
}

inline void write_string(std::ostream& out, std::string_view s) {
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in, std::string_view what,
                               std::uint32_t max_len = 1u << 26) {
  const auto n = read_le<std::uint32_t>(in, what);
  if (n > max_len) {
    throw FormatError("implausible length for " + std::string(what));
  }
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) {
    throw FormatError("unexpected end of file while reading " + std::string(what));
  }
  return s;
}

inline void expect_magic(std::istream& in, std::string_view magic) {
  std::string got(magic.size(), '\0');
  in.read(got.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || got != magic) {
    throw FormatError("bad magic bytes: expected '" + std::string(magic) + "'");
  }
}

}  // namespace slam::io
