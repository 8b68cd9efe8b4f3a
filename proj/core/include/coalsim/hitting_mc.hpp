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
#include <span>
#include <vector>

#include "coalsim/estimate.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/rng.hpp"
#include "coalsim/scaling.hpp"

namespace coalsim {

/// Magnitude past which a walk position is treated as overflowed.
inline constexpr wide_uint kPositionLimit = static_cast<wide_uint>(1) << 126;

/// First arrival time at 0 of a rate-`rate` walk started at x, or +inf if it
/// has not happened by t_max. `overflow` is set when the position left the
/// representable range.
struct FirstPassage {
  double tau = 0.0;
  bool overflow = false;
};

FirstPassage first_passage(const JumpKernel& kernel, wide_int x, double t_max, PhiloxStream& rng,
                           double rate = 1.0);

struct HittingCurve {
  std::vector<double> times;
  /// P(tau_x > t) per time, from common paths.
  std::vector<Estimate> survival;
  std::uint64_t overflow = 0;
  bool truncated = false;
};

/// Walk i uses stream (seed, purpose, i); results do not depend on workers.
HittingCurve mc_hitting_curve(const JumpKernel& kernel, wide_int x, std::span<const double> times,
                              std::uint64_t n, std::uint64_t seed, unsigned workers = 1,
                              StreamPurpose purpose = StreamPurpose::kHitting, double rate = 1.0);

struct HittingMcResult {
  Estimate estimate;
  std::uint64_t overflow = 0;
};

/// Requires n >= 1000 and x != 0.
HittingMcResult mc_hitting_tail(const JumpKernel& kernel, std::int64_t x, double t,
                                std::uint64_t n, std::uint64_t seed, unsigned workers = 1);

struct FarStartReport {
  double t = 0.0;
  double theta = 0.0;
  double b_t = 0.0;
  double ell_t = 0.0;
  std::int64_t x = 0;
  /// P(tau_x <= t).
  Estimate hit_probability;
  /// ell(t)^(-1 + (1 - alpha) theta + epsilon) with epsilon = 0.1.
  double bound = 0.0;
  bool pass = false;
};

/// x = ceil(B_t / ell(t)^theta); pass when the estimate is at most 10x the
/// bound shape.
FarStartReport far_start_check(const JumpKernel& kernel, const ScalingFunctions& scaling,
                               double theta, double t, std::uint64_t n, std::uint64_t seed,
                               unsigned workers = 1);

}  // namespace coalsim
