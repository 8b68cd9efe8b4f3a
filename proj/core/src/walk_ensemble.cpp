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

#include "coalsim/walk_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "coalsim/hitting_mc.hpp"
#include "coalsim/parallel.hpp"

namespace coalsim {

namespace {

constexpr std::uint64_t kBlock = 1024;

}  // namespace

CollisionResult collision_time(const JumpKernel& kernel, std::span<const std::int64_t> x,
                               std::span<const std::uint32_t> walk_ids, std::uint64_t seed,
                               std::uint64_t replica, StreamPurpose purpose, double t_max,
                               bool stop_at_collision) {
  const std::size_t N = x.size();
  if (walk_ids.size() != N) {
    throw std::invalid_argument("collision_time: one walk id per coordinate");
  }
  std::vector<PhiloxStream> streams;
  streams.reserve(N);
  WalkEnsemble e;
  for (std::size_t k = 0; k < N; ++k) {
    streams.emplace_back(seed, stream_id(purpose, replica, walk_ids[k]));
    e.positions.push_back(x[k]);
    e.next_jump.push_back(streams.back().exponential(1.0));
  }
  e.tau = std::numeric_limits<double>::infinity();
  for (;;) {
    const auto k = static_cast<std::size_t>(
        std::min_element(e.next_jump.begin(), e.next_jump.end()) - e.next_jump.begin());
    if (e.next_jump[k] > t_max) {
      break;
    }
    e.now = e.next_jump[k];
    e.positions[k] += kernel.sample(streams[k]);
    e.next_jump[k] = e.now + streams[k].exponential(1.0);
    const wide_int p = e.positions[k];
    if ((p < 0 ? -p : p) > static_cast<wide_int>(kPositionLimit)) {
      e.overflow = true;
      break;
    }
    if (!e.collided) {
      for (std::size_t m = 0; m < N; ++m) {
        if (m != k && e.positions[m] == p) {
          e.collided = true;
          e.tau = e.now;
          break;
        }
      }
      if (e.collided && stop_at_collision) {
        break;
      }
    }
  }
  return {e.tau, e.overflow, e.positions};
}

NonCollisionResult mc_noncollision(const JumpKernel& kernel, std::span<const std::int64_t> x,
                                   std::span<const double> checkpoints, std::uint64_t n,
                                   std::uint64_t seed, unsigned workers) {
  if (x.size() < 2) {
    throw std::invalid_argument("mc_noncollision requires N >= 2");
  }
  std::vector<std::int64_t> xs(x.begin(), x.end());
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw std::invalid_argument("mc_noncollision requires distinct coordinates");
  }
  std::vector<std::uint32_t> ids(xs.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    ids[k] = static_cast<std::uint32_t>(k);
  }
  NonCollisionResult out;
  out.times.assign(checkpoints.begin(), checkpoints.end());
  const double t_max =
      checkpoints.empty() ? 0.0 : *std::max_element(checkpoints.begin(), checkpoints.end());

  struct Block {
    std::vector<double> tau;
    std::uint64_t overflow = 0;
  };
  const std::uint64_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<char> done;
  auto results = run_indexed<Block>(
      blocks, workers,
      [&](std::uint64_t b) {
        Block blk;
        const std::uint64_t end = std::min(n, (b + 1) * kBlock);
        for (std::uint64_t r = b * kBlock; r < end; ++r) {
          const auto c =
              collision_time(kernel, xs, ids, seed, r, StreamPurpose::kNonCollision, t_max);
          blk.tau.push_back(c.overflow ? std::numeric_limits<double>::quiet_NaN() : c.tau);
          blk.overflow += c.overflow ? 1 : 0;
        }
        return blk;
      },
      &done);
  std::vector<Welford> acc(checkpoints.size());
  for (std::uint64_t b = 0; b < blocks; ++b) {
    if (!done[b]) {
      out.truncated = true;
      continue;
    }
    out.overflow += results[b].overflow;
    for (std::size_t i = 0; i < results[b].tau.size(); ++i) {
      const double tau = results[b].tau[i];
      out.tau.push_back(tau);
      out.replica.push_back(b * kBlock + i);
      if (std::isnan(tau)) {
        continue;
      }
      for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        acc[k].add(tau > checkpoints[k] ? 1.0 : 0.0);
      }
    }
  }
  for (const auto& w : acc) {
    out.survival.push_back(w.estimate());
  }
  return out;
}

IndependenceReport mc_joint_independence(const JumpKernel& kernel,
                                         std::array<std::int64_t, 2> x, double t,
                                         double bucket_width, double b_t, std::uint64_t n,
                                         std::uint64_t seed, unsigned workers, bool control) {
  if (x[0] == x[1]) {
    throw std::invalid_argument("mc_joint_independence requires distinct starts");
  }
  if (!(bucket_width > 0.0) || !(b_t > 0.0)) {
    throw std::invalid_argument("bucket width and B_t must be positive");
  }
  const std::uint32_t ids[2] = {0, 1};
  const double width = bucket_width * b_t;
  struct Sample {
    std::int64_t bucket = 0;
    bool survived = false;
    bool valid = false;
  };
  const std::uint64_t blocks = (n + kBlock - 1) / kBlock;
  auto results = run_indexed<std::vector<Sample>>(blocks, workers, [&](std::uint64_t b) {
    std::vector<Sample> out;
    const std::uint64_t end = std::min(n, (b + 1) * kBlock);
    for (std::uint64_t r = b * kBlock; r < end; ++r) {
      const auto main = collision_time(kernel, x, ids, seed, r, StreamPurpose::kIndependence, t,
                                       /*stop_at_collision=*/false);
      Sample s;
      s.valid = !main.overflow;
      s.bucket = static_cast<std::int64_t>(
          std::floor(static_cast<double>(main.positions[0]) / width));
      s.survived = !(main.tau <= t);
      if (control) {
        const auto other = collision_time(kernel, x, ids, seed, r,
                                          StreamPurpose::kIndependenceControl, t);
        s.valid = s.valid && !other.overflow;
        s.survived = !(other.tau <= t);
      }
      out.push_back(s);
    }
    return out;
  });

  std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> cells;  // (n_b, n_b and S)
  std::uint64_t total = 0, survivors = 0;
  Welford surv;
  for (const auto& blk : results) {
    for (const auto& s : blk) {
      if (!s.valid) {
        continue;
      }
      ++total;
      survivors += s.survived ? 1 : 0;
      surv.add(s.survived ? 1.0 : 0.0);
      auto& c = cells[s.bucket];
      ++c.first;
      c.second += s.survived ? 1 : 0;
    }
  }
  IndependenceReport rep;
  rep.t = t;
  rep.bucket_width = bucket_width;
  rep.b_t = b_t;
  rep.control = control;
  rep.survival = surv.estimate();
  rep.buckets = cells.size();
  if (total == 0) {
    return rep;
  }
  const double nn = static_cast<double>(total);
  const double ps = static_cast<double>(survivors) / nn;
  for (const auto& [bucket, c] : cells) {
    const double pb = static_cast<double>(c.first) / nn;
    const double p11 = static_cast<double>(c.second) / nn;
    const double p10 = pb - p11;
    const double p01 = ps - p11;
    const double p00 = 1.0 - pb - ps + p11;
    const double cov = p11 - pb * ps;
    // Influence values (I_b - p_b)(S - p_S) on the four cells.
    const double v11 = (1 - pb) * (1 - ps), v10 = (1 - pb) * (-ps), v01 = (-pb) * (1 - ps),
                 v00 = pb * ps;
    const double m2 = p11 * v11 * v11 + p10 * v10 * v10 + p01 * v01 * v01 + p00 * v00 * v00;
    rep.discrepancy += std::abs(cov);
    rep.std_error += std::sqrt(std::max(0.0, m2 - cov * cov) / nn);
  }
  return rep;
}

}  // namespace coalsim
