// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace slam::train {

struct StepRecord {
  std::size_t step = 0;
  std::uint64_t tokens_seen = 0;
  double cumulative_flops = 0.0;
  double train_loss = 0.0;
  double lr = 0.0;
  double grad_norm = 0.0;
};

struct ValidationRecord {
  std::size_t step = 0;
  std::uint64_t tokens_seen = 0;
  double cumulative_flops = 0.0;
  double loss = 0.0;
  double perplexity = 0.0;
};

struct TrainLog {
  std::vector<StepRecord> steps;
  std::vector<ValidationRecord> validation;
  std::string stop_reason;

  // Columns: step,tokens_seen,cumulative_flops,train_loss,lr,grad_norm
  void write_csv(std::ostream& out) const;
  // Columns: step,tokens_seen,cumulative_flops,val_loss,val_ppl
  void write_validation_csv(std::ostream& out) const;
};

}  // namespace slam::train
