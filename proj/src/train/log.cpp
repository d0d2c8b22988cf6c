// Copyright 2026 The slamkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "slam/train/log.hpp"

#include <ostream>

#include "../common/text.hpp"

namespace slam::train {

void TrainLog::write_csv(std::ostream& out) const {
  out << "step,tokens_seen,cumulative_flops,train_loss,lr,grad_norm\n";
  for (const auto& r : steps) {
    out << r.step << ',' << r.tokens_seen << ',' << text::format_double(r.cumulative_flops) << ','
        << text::format_double(r.train_loss) << ',' << text::format_double(r.lr) << ','
        << text::format_double(r.grad_norm) << '\n';
  }
}

void TrainLog::write_validation_csv(std::ostream& out) const {
  out << "step,tokens_seen,cumulative_flops,val_loss,val_ppl\n";
  for (const auto& r : validation) {
    out << r.step << ',' << r.tokens_seen << ',' << text::format_double(r.cumulative_flops) << ','
        << text::format_double(r.loss) << ',' << text::format_double(r.perplexity) << '\n';
  }
}

}  // namespace slam::train
