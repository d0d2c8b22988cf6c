// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/train/budget.hpp"

#include <chrono>

#include "slam/error.hpp"

namespace slam::train {

double SteadyClock::now_seconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

BudgetClock::BudgetClock(BudgetLimits limits, std::shared_ptr<const Clock> clock)
    : limits_(limits), clock_(std::move(clock)) {
  if (!limits_.wall_seconds && !limits_.steps && !limits_.flops) {
    throw ConfigError("budget: at least one limit (wall clock, steps or FLOPs) is required");
  }
  if ((limits_.wall_seconds && !(*limits_.wall_seconds >= 0.0)) ||
      (limits_.flops && !(*limits_.flops >= 0.0))) {
    throw ConfigError("budget: limits must be non-negative");
  }
  if (!clock_) throw ConfigError("budget: clock is required");
}

void BudgetClock::start() {
  if (running_) return;
  running_ = true;
  started_at_ = clock_->now_seconds();
}

void BudgetClock::pause() {
  if (!running_) return;
  banked_ += clock_->now_seconds() - started_at_;
  running_ = false;
}

void BudgetClock::resume() { start(); }

double BudgetClock::elapsed_seconds() const {
  return banked_ + (running_ ? clock_->now_seconds() - started_at_ : 0.0);
}

void BudgetClock::record_step(double step_flops) {
  ++steps_;
  flops_ += step_flops;
}

std::optional<std::string> BudgetClock::exhaustion_reason() const {
  if (limits_.steps && steps_ >= *limits_.steps) return "steps";
  if (limits_.flops && flops_ >= *limits_.flops) return "flops";
  if (limits_.wall_seconds && elapsed_seconds() >= *limits_.wall_seconds) return "wall_clock";
  return std::nullopt;
}

}  // namespace slam::train
