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

namespace coalsim {

struct EventRecord {
  double time = 0.0;
  std::uint32_t mover = 0;
  std::uint32_t target = 0;
  bool coalesced = false;
};

/// Coalescing walks on the torus Z/MZ. Occupied sites are kept in a dense
/// list with a site -> slot index, so selection, lookup and removal are O(1).
class ParticleSystem {
 public:
  /// All M sites occupied at time 0. Requires 2 <= M < 2^31.
  explicit ParticleSystem(std::uint64_t M);

  std::uint64_t size() const { return M_; }
  std::uint64_t count() const { return occupied_.size(); }
  double now() const { return now_; }
  bool occupied(std::uint64_t site) const { return slot_[site % M_] >= 0; }
  std::span<const std::uint32_t> sites() const { return occupied_; }

  /// One Gillespie event: wait Exp(count), move a uniformly chosen particle
  /// by a kernel jump wrapped mod M; merge if the target is occupied. Jumps
  /// that wrap to displacement 0 are redrawn. Throws std::logic_error when
  /// empty.
  EventRecord step(const JumpKernel& kernel, PhiloxStream& rng);
  /// Same event with the Exp(count) waiting time supplied by the caller.
  EventRecord step_after(double wait, const JumpKernel& kernel, PhiloxStream& rng);

 private:
  std::uint64_t M_;
  std::vector<std::uint32_t> occupied_;
  std::vector<std::int32_t> slot_;
  double now_ = 0.0;
};

ParticleSystem init_full_torus(std::uint64_t M);

inline EventRecord step_event(ParticleSystem& system, const JumpKernel& kernel,
                              PhiloxStream& rng) {
  return system.step(kernel, rng);
}

/// Number of translations v in Z/MZ with v + x_i occupied for every i.
std::uint64_t count_translation_hits(const ParticleSystem& system,
                                     std::span<const std::int64_t> offsets);

/// One replica of a full-torus run observed at increasing checkpoints.
struct CoalescingReplica {
  std::vector<std::uint64_t> counts;
  /// hits[s][k]: translation hits of offset set s at checkpoint k.
  std::vector<std::vector<std::uint64_t>> hits;
  std::uint64_t events = 0;
  std::uint64_t coalescences = 0;
  bool monotone = true;
};

/// Exact path simulation from the full torus; counts and N-point hits are
/// recorded at each checkpoint. The stream is (seed, kDensity, replica).
CoalescingReplica run_coalescing(const JumpKernel& kernel, std::uint64_t M,
                                 std::span<const double> checkpoints,
                                 const std::vector<std::vector<std::int64_t>>& offset_sets,
                                 std::uint64_t seed, std::uint64_t replica);

/// Density count/M per checkpoint for one replica.
std::vector<double> run_density(const JumpKernel& kernel, std::uint64_t M,
                                std::span<const double> checkpoints, std::uint64_t seed,
                                std::uint64_t replica);

/// Mean over replicas of hits/translations, with the standard error from
/// the spread between replicas.
Estimate estimate_npoint(std::span<const std::uint64_t> hits_per_replica,
                         std::uint64_t translations);

}  // namespace coalsim
