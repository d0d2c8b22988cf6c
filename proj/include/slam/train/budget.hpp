// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

namespace slam::train {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now_seconds() const = 0;
};

class SteadyClock final : public Clock {
 public:
  double now_seconds() const override;
};

// Test clock; time moves only through advance().
class ManualClock final : public Clock {
 public:
  double now_seconds() const override { return now_; }
  void advance(double seconds) { now_ += seconds; }

 private:
  double now_ = 0.0;
};

struct BudgetLimits {
  std::optional<double> wall_seconds;
  std::optional<std::size_t> steps;
  std::optional<double> flops;
};

class BudgetClock {
 public:
  explicit BudgetClock(BudgetLimits limits,
                       std::shared_ptr<const Clock> clock = std::make_shared<SteadyClock>());

  // Wall time accrues only between start() and pause(), and after resume().
  void start();
  void pause();
  void resume();
  bool running() const { return running_; }

  void record_step(double step_flops);

  double elapsed_seconds() const;
  std::size_t steps() const { return steps_; }
  double flops() const { return flops_; }
  const BudgetLimits& limits() const { return limits_; }

  bool exhausted() const { return exhaustion_reason().has_value(); }
  // "steps", "flops" or "wall_clock" for the first exhausted limit.
  std::optional<std::string> exhaustion_reason() const;

 private:
  BudgetLimits limits_;
  std::shared_ptr<const Clock> clock_;
  bool running_ = false;
  double banked_ = 0.0;
  double started_at_ = 0.0;
  std::size_t steps_ = 0;
  double flops_ = 0.0;
};

}  // namespace slam::train
