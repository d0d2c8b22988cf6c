// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace slam {

// Base of every error thrown by the toolkit. The subclasses map onto the CLI
// exit codes (see tools/slam.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad dimensions, out-of-range hyperparameters,
// unknown recipe keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Call-site contract violated by the data passed in (token out of range,
// sequence longer than the context, empty inputs).
class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed file or serialized payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss, gradient or norm.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace slam
