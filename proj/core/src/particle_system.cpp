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

#include "coalsim/particle_system.hpp"

#include <stdexcept>

namespace coalsim {

ParticleSystem::ParticleSystem(std::uint64_t M) : M_(M) {
  if (M < 2 || M >= (std::uint64_t{1} << 31)) {
    throw std::invalid_argument("torus size must satisfy 2 <= M < 2^31");
  }
  occupied_.resize(M);
  slot_.resize(M);
  for (std::uint64_t i = 0; i < M; ++i) {
    occupied_[i] = static_cast<std::uint32_t>(i);
    slot_[i] = static_cast<std::int32_t>(i);
  }
}

ParticleSystem init_full_torus(std::uint64_t M) { return ParticleSystem(M); }

EventRecord ParticleSystem::step(const JumpKernel& kernel, PhiloxStream& rng) {
  if (occupied_.empty()) {
    throw std::logic_error("step on an empty particle system");
  }
  return step_after(rng.exponential(static_cast<double>(occupied_.size())), kernel, rng);
}

EventRecord ParticleSystem::step_after(double wait, const JumpKernel& kernel, PhiloxStream& rng) {
  if (occupied_.empty()) {
    throw std::logic_error("step on an empty particle system");
  }
  EventRecord ev;
  now_ += wait;
  ev.time = now_;
  const auto i = static_cast<std::size_t>(rng.below(occupied_.size()));
  const std::uint32_t from = occupied_[i];
  const auto modulus = static_cast<std::int64_t>(M_);
  std::uint64_t shift = 0;
  for (int attempt = 0;; ++attempt) {
    const wide_int jump = kernel.sample(rng);
    std::int64_t d = 0;
    if (jump > -INT64_MAX && jump < INT64_MAX) {
      d = static_cast<std::int64_t>(jump) % modulus;
    } else {
      d = static_cast<std::int64_t>(jump % static_cast<wide_int>(modulus));
    }
    if (d < 0) {
      d += modulus;
    }
    if (d != 0) {
      shift = static_cast<std::uint64_t>(d);
      break;
    }
    if (attempt > 1000000) {
      throw std::runtime_error("kernel puts no mass on nonzero torus displacements");
    }
  }
  const auto to = static_cast<std::uint32_t>((from + shift) % M_);
  ev.mover = from;
  ev.target = to;
  slot_[from] = -1;
  if (slot_[to] >= 0) {
    ev.coalesced = true;
    const std::uint32_t last = occupied_.back();
    occupied_[i] = last;
    occupied_.pop_back();
    if (last != from) {
      slot_[last] = static_cast<std::int32_t>(i);
    }
  } else {
    occupied_[i] = to;
    slot_[to] = static_cast<std::int32_t>(i);
  }
  return ev;
}

std::uint64_t count_translation_hits(const ParticleSystem& system,
                                     std::span<const std::int64_t> offsets) {
  if (offsets.empty()) {
    return 0;
  }
  const auto M = static_cast<std::int64_t>(system.size());
  auto wrap = [M](std::int64_t v) {
    v %= M;
    return v < 0 ? v + M : v;
  };
  std::uint64_t hits = 0;
  for (const std::uint32_t s : system.sites()) {
    const std::int64_t v = static_cast<std::int64_t>(s) - offsets[0];
    bool all = true;
    for (std::size_t k = 1; k < offsets.size() && all; ++k) {
      all = system.occupied(static_cast<std::uint64_t>(wrap(v + offsets[k])));
    }
    hits += all ? 1 : 0;
  }
  return hits;
}

CoalescingReplica run_coalescing(const JumpKernel& kernel, std::uint64_t M,
                                 std::span<const double> checkpoints,
                                 const std::vector<std::vector<std::int64_t>>& offset_sets,
                                 std::uint64_t seed, std::uint64_t replica) {
  for (std::size_t k = 1; k < checkpoints.size(); ++k) {
    if (!(checkpoints[k] > checkpoints[k - 1])) {
      throw std::invalid_argument("checkpoints must be strictly increasing");
    }
  }
  CoalescingReplica out;
  out.hits.assign(offset_sets.size(), {});
  ParticleSystem sys(M);
  PhiloxStream rng(seed, stream_id(StreamPurpose::kDensity, replica));
  std::size_t next = 0;
  std::uint64_t last_count = sys.count();
  auto record = [&] {
    out.counts.push_back(sys.count());
    out.monotone = out.monotone && sys.count() <= last_count;
    last_count = sys.count();
    for (std::size_t s = 0; s < offset_sets.size(); ++s) {
      out.hits[s].push_back(count_translation_hits(sys, offset_sets[s]));
    }
  };
  while (next < checkpoints.size()) {
    // Checkpoints before the next event see the current configuration.
    const double wait = rng.exponential(static_cast<double>(sys.count()));
    while (next < checkpoints.size() && checkpoints[next] < sys.now() + wait) {
      record();
      ++next;
    }
    if (next == checkpoints.size()) {
      break;
    }
    const auto ev = sys.step_after(wait, kernel, rng);
    ++out.events;
    out.coalescences += ev.coalesced ? 1 : 0;
  }
  return out;
}

std::vector<double> run_density(const JumpKernel& kernel, std::uint64_t M,
                                std::span<const double> checkpoints, std::uint64_t seed,
                                std::uint64_t replica) {
  const auto rep = run_coalescing(kernel, M, checkpoints, {}, seed, replica);
  std::vector<double> out;
  for (const auto c : rep.counts) {
    out.push_back(static_cast<double>(c) / static_cast<double>(M));
  }
  return out;
}

Estimate estimate_npoint(std::span<const std::uint64_t> hits_per_replica,
                         std::uint64_t translations) {
  Welford w;
  for (const auto h : hits_per_replica) {
    w.add(static_cast<double>(h) / static_cast<double>(translations));
  }
  return w.estimate();
}

}  // namespace coalsim
