// Copyright 2026 The coalsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coalsim/jump_kernel.hpp"
#include "coalsim/stable_model.hpp"

namespace coalsim {

/// B_t = g(0) / P(X_t = 0) computed directly from the kernel.
double space_scale(const JumpKernel& kernel, double t);

struct LltReport {
  double t = 0.0;
  double b_t = 0.0;
  double sup_error = 0.0;
  std::int64_t argmax = 0;
  std::size_t points = 0;
};

/// sup over |x| <= width * B_t of |B_t P(X_t = x) - g(x / B_t)|, sampled at
/// roughly `points` evenly spaced sites.
LltReport llt_sup_error(const JumpKernel& kernel, const StableModel& model, double t,
                        double width = 5.0, std::size_t points = 400);

struct DlltRow {
  std::int64_t x = 0;
  std::int64_t y = 0;
  double difference = 0.0;
  double ratio = 0.0;
};

struct DlltReport {
  double t = 0.0;
  double b_t = 0.0;
  std::vector<DlltRow> rows;
  double max_ratio = 0.0;
};

/// |P(X_t = x + y) - P(X_t = x)| B_t^2 / |y| per pair.
DlltReport dllt_bound_check(const JumpKernel& kernel, double t,
                            const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs);

struct DtlltReport {
  double t = 0.0;
  double s = 0.0;
  double b_t = 0.0;
  double difference = 0.0;
  double ratio = 0.0;
};

/// |P(X_t = 0) - P(X_{t+s} = 0)| B_t t / s. Requires 0 < s <= t / 10.
DtlltReport dtllt_bound_check(const JumpKernel& kernel, double t, double s);

}  // namespace coalsim
