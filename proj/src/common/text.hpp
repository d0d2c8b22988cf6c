// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "slam/error.hpp"
#include "slam/tokens.hpp"

namespace slam::text {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Parses whitespace-separated non-negative token ids. Returns false on any
// malformed entry.
inline bool parse_token_list(std::string_view s, TokenSeq& out) {
  out.clear();
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data() + i, s.data() + j, v);
    if (res.ec != std::errc{} || res.ptr != s.data() + j || v > 0xFFFFFFFFull) {
      return false;
    }
    out.push_back(static_cast<Token>(v));
    i = j;
  }
  return true;
}

inline std::string join_tokens(std::span<const Token> seq) {
  std::string s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s.push_back(' ');
    s += std::to_string(seq[i]);
  }
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline bool parse_bool(std::string_view s, bool& out) {
  s = trim(s);
  if (s == "true" || s == "True" || s == "1") {
    out = true;
    return true;
  }
  if (s == "false" || s == "False" || s == "0") {
    out = false;
    return true;
  }
  return false;
}

}  // namespace slam::text
