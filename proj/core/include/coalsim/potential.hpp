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
#include <map>

#include "coalsim/jump_kernel.hpp"

namespace coalsim {

struct PotentialValue {
  std::int64_t x = 0;
  double a_full = 0.0;
  std::map<double, double> a_partial;
};

/// a(x) = (1/pi) int_0^pi (1 - cos(x u)) / psi(u) du.
double potential_kernel(const JumpKernel& kernel, std::int64_t x);

/// a(x, t) = int_0^t (P(X_s = 0) - P(X_s = x)) ds, integrated in time.
double potential_kernel_partial(const JumpKernel& kernel, std::int64_t x, double t);

/// Same quantity from (1/pi) int (1 - cos(x u)) (1 - exp(-t psi)) / psi du.
double potential_kernel_partial_spectral(const JumpKernel& kernel, std::int64_t x, double t);

struct PotentialIdentity {
  std::int64_t cutoff = 0;
  /// sum_{0 < |y| <= cutoff} p(y) a(y)
  double truncated_sum = 0.0;
  /// sum_{|y| > cutoff} p(y) a(y), as (1/pi) int psi_{>cutoff} / psi du.
  double remainder = 0.0;
  double total = 0.0;
  /// T(cutoff + 1) a(cutoff): size of the omitted terms if a were flat.
  double crude_tail = 0.0;
};

PotentialIdentity potential_identity(const JumpKernel& kernel, std::int64_t cutoff = 1000);

}  // namespace coalsim
