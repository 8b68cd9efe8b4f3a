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

#include "coalsim/hitting_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "coalsim/parallel.hpp"

namespace coalsim {

namespace {

constexpr std::uint64_t kBlock = 4096;

wide_uint magnitude(wide_int v) { return v < 0 ? static_cast<wide_uint>(-v) : static_cast<wide_uint>(v); }

}  // namespace

FirstPassage first_passage(const JumpKernel& kernel, wide_int x, double t_max, PhiloxStream& rng,
                           double rate) {
  FirstPassage out;
  out.tau = std::numeric_limits<double>::infinity();
  if (x == 0) {
    out.tau = 0.0;
    return out;
  }
  double now = 0.0;
  wide_int pos = x;
  for (;;) {
    now += rng.exponential(rate);
    if (now > t_max) {
      return out;
    }
    pos += kernel.sample(rng);
    if (pos == 0) {
      out.tau = now;
      return out;
    }
    if (magnitude(pos) > kPositionLimit) {
      out.overflow = true;
      return out;
    }
  }
}

HittingCurve mc_hitting_curve(const JumpKernel& kernel, wide_int x, std::span<const double> times,
                              std::uint64_t n, std::uint64_t seed, unsigned workers,
                              StreamPurpose purpose, double rate) {
  HittingCurve curve;
  curve.times.assign(times.begin(), times.end());
  const double t_max = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
  struct Block {
    std::vector<Welford> acc;
    std::uint64_t overflow = 0;
  };
  const std::uint64_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<char> done;
  auto results = run_indexed<Block>(
      blocks, workers,
      [&](std::uint64_t b) {
        Block out;
        out.acc.resize(times.size());
        const std::uint64_t end = std::min(n, (b + 1) * kBlock);
        for (std::uint64_t i = b * kBlock; i < end; ++i) {
          PhiloxStream rng(seed, stream_id(purpose, i));
          const auto fp = first_passage(kernel, x, t_max, rng, rate);
          if (fp.overflow) {
            ++out.overflow;
            continue;
          }
          for (std::size_t k = 0; k < times.size(); ++k) {
            out.acc[k].add(fp.tau > times[k] ? 1.0 : 0.0);
          }
        }
        return out;
      },
      &done);
  std::vector<Welford> total(times.size());
  for (std::uint64_t b = 0; b < blocks; ++b) {
    if (!done[b]) {
      curve.truncated = true;
      continue;
    }
    curve.overflow += results[b].overflow;
    for (std::size_t k = 0; k < times.size(); ++k) {
      total[k].merge(results[b].acc[k]);
    }
  }
  for (const auto& w : total) {
    curve.survival.push_back(w.estimate());
  }
  return curve;
}

HittingMcResult mc_hitting_tail(const JumpKernel& kernel, std::int64_t x, double t,
                                std::uint64_t n, std::uint64_t seed, unsigned workers) {
  if (x == 0) {
    throw std::invalid_argument("mc_hitting_tail requires x != 0");
  }
  if (n < 1000) {
    throw std::invalid_argument("mc_hitting_tail requires n >= 1000");
  }
  const double times[] = {t};
  const auto curve = mc_hitting_curve(kernel, x, times, n, seed, workers);
  return {curve.survival[0], curve.overflow};
}

FarStartReport far_start_check(const JumpKernel& kernel, const ScalingFunctions& scaling,
                               double theta, double t, std::uint64_t n, std::uint64_t seed,
                               unsigned workers) {
  const double alpha = kernel.alpha();
  if (!(theta > 0.0) || (alpha < 1.0 && !(theta < 1.0 / (1.0 - alpha)))) {
    throw std::invalid_argument("far_start_check requires theta in (0, 1/(1-alpha))");
  }
  FarStartReport rep;
  rep.t = t;
  rep.theta = theta;
  rep.b_t = scaling.b(t);
  rep.ell_t = script_ell(scaling, t);
  rep.x = static_cast<std::int64_t>(std::ceil(rep.b_t / std::pow(rep.ell_t, theta)));
  const double times[] = {t};
  const auto curve = mc_hitting_curve(kernel, rep.x, times, n, seed, workers,
                                      StreamPurpose::kFarStart);
  rep.hit_probability = curve.survival[0];
  rep.hit_probability.mean = 1.0 - rep.hit_probability.mean;
  rep.bound = std::pow(rep.ell_t, -1.0 + (1.0 - alpha) * theta + 0.1);
  rep.pass = rep.hit_probability.mean <= 10.0 * rep.bound;
  return rep;
}

}  // namespace coalsim
