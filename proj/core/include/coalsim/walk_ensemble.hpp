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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "coalsim/estimate.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/rng.hpp"

namespace coalsim {

/// N independent rate-1 walks on Z. Walk k draws from stream
/// (seed, purpose, replica, walk_ids[k]) and runs on its own clock.
struct WalkEnsemble {
  std::vector<wide_int> positions;
  std::vector<double> next_jump;
  double now = 0.0;
  bool collided = false;
  bool overflow = false;
  double tau = 0.0;
};

struct CollisionResult {
  /// First time a jump lands on another walk, +inf if none by t_max.
  double tau = 0.0;
  bool overflow = false;
  std::vector<wide_int> positions;
};

/// With stop_at_collision = false the walks run to t_max regardless and the
/// returned positions are the ones at t_max.
CollisionResult collision_time(const JumpKernel& kernel, std::span<const std::int64_t> x,
                               std::span<const std::uint32_t> walk_ids, std::uint64_t seed,
                               std::uint64_t replica, StreamPurpose purpose, double t_max,
                               bool stop_at_collision = true);

struct NonCollisionResult {
  std::vector<double> times;
  std::vector<Estimate> survival;
  /// Per replica collision time (+inf when none by the last checkpoint).
  std::vector<double> tau;
  /// Replica index of each tau entry.
  std::vector<std::uint64_t> replica;
  std::uint64_t overflow = 0;
  bool truncated = false;
};

/// Requires N >= 2 distinct coordinates. Coordinates are sorted first, so
/// any permutation of x gives the same result.
NonCollisionResult mc_noncollision(const JumpKernel& kernel, std::span<const std::int64_t> x,
                                   std::span<const double> checkpoints, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers = 1);

struct IndependenceReport {
  double t = 0.0;
  double bucket_width = 0.0;
  double b_t = 0.0;
  /// sum over buckets of |P(bucket, no collision) - P(bucket) P(no collision)|
  double discrepancy = 0.0;
  double std_error = 0.0;
  Estimate survival;
  std::size_t buckets = 0;
  bool control = false;
};

/// Buckets the first walk's position at time t into intervals of width
/// bucket_width * b_t. With control = true the survival indicator comes
/// from a second, independent pair.
IndependenceReport mc_joint_independence(const JumpKernel& kernel,
                                         std::array<std::int64_t, 2> x, double t,
                                         double bucket_width, double b_t, std::uint64_t n,
                                         std::uint64_t seed, unsigned workers = 1,
                                         bool control = false);

}  // namespace coalsim
