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


#include <cmath>
#include <stdexcept>
#include <vector>

#include "coalsim/jump_kernel.hpp"
#include "coalsim/llt_checks.hpp"
#include "coalsim/stable_model.hpp"
#include "coalsim/transition.hpp"
#include "doctest.h"

using namespace coalsim;

namespace {

// P(X_t = x) for |x| <= W by Poisson mixing of convolution powers restricted
// to [-W, W]. Paths that leave the window and return are dropped; for
// alpha = 1 and W = 1000 that loss is below 1e-9.
std::vector<double> poisson_mixture(const JumpKernel& k, double t, int W) {
  const int n = 2 * W + 1;
  std::vector<double> p(n), cur(n, 0.0), out(n, 0.0), next(n);
  for (int i = 0; i < n; ++i) {
    p[i] = k.mass(i - W);
  }
  cur[W] = 1.0;
  double weight = std::exp(-t);
  for (int m = 0; m < 40; ++m) {
    for (int i = 0; i < n; ++i) {
      out[i] += weight * cur[i];
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      if (cur[i] == 0.0) {
        continue;
      }
      const int lo = std::max(0, i - W);
      const int hi = std::min(n - 1, i + W);
      for (int j = lo; j <= hi; ++j) {
        next[j] += cur[i] * p[j - i + W];
      }
    }
    cur.swap(next);
    weight *= t / (m + 1);
  }
  return out;
}

}  // namespace

TEST_CASE("time zero is a point mass") {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  CHECK(transition_probability(k, {0.0, 0, 1.0}) == 1.0);
  CHECK(transition_probability(k, {0.0, 3, 1.0}) == 0.0);
  CHECK(transition_difference(k, 0, 5.0) == 0.0);
  CHECK(transition_difference(k, 7, 0.0) == 1.0);
}

TEST_CASE("short times follow the Poisson expansion") {
  for (double alpha : {0.5, 1.0}) {
    const auto k = build_kernel(alpha, ConstantSvf{1.0});
    double sq = 0.0;
    for (std::int64_t y = -200000; y <= 200000; ++y) {
      sq += k.mass(y) * k.mass(y);
    }
    const double t = 0.01;
    const double expect = std::exp(-t) * (1.0 + 0.5 * t * t * sq);
    CHECK(std::abs(transition_probability(k, {t, 0, 1.0}) - expect) < 1e-5);
  }
}

TEST_CASE("transition probabilities match the convolution oracle (alpha = 1, t = 1)") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  const int W = 1000;
  const auto oracle = poisson_mixture(k, 1.0, W);
  for (int x : {0, 1, 2, 5, 17, 100, 400}) {
    CAPTURE(x);
    CHECK(std::abs(transition_probability(k, {1.0, x, 1.0}) - oracle[x + W]) < 1e-8);
    CHECK(transition_probability(k, {1.0, -x, 1.0}) ==
          doctest::Approx(transition_probability(k, {1.0, x, 1.0})).epsilon(1e-12));
  }
  // Rate r at time t is the same law as rate 1 at time r t.
  CHECK(transition_probability(k, {0.5, 3, 2.0}) ==
        doctest::Approx(transition_probability(k, {1.0, 3, 1.0})).epsilon(1e-12));
}

TEST_CASE("probabilities are bounded and the return probability decreases") {
  const auto k = build_kernel(0.7, LogPowerSvf{0.5});
  double prev = 1.0;
  for (double t = 0.1; t < 1e4; t *= 2.0) {
    const double p0 = transition_probability(k, {t, 0, 1.0});
    CHECK(p0 > 0.0);
    CHECK(p0 < prev);
    prev = p0;
    for (std::int64_t x : {1, 10, 1000}) {
      const double px = transition_probability(k, {t, x, 1.0});
      CHECK(px >= -1e-15);
      CHECK(px <= p0 + 1e-15);
    }
  }
}

TEST_CASE("local limit theorem at alpha = 1") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  const auto model = build_model(1.0, ConstantSvf{1.0});
  const auto rep = llt_sup_error(k, model, 1000.0);
  CHECK(rep.points > 0);
  CHECK(rep.sup_error <= 0.02);
  const auto early = llt_sup_error(k, model, 10.0);
  CHECK(rep.sup_error < early.sup_error);
}

TEST_CASE("spectral rule agrees with the direct route") {
  for (double alpha : {0.5, 1.0}) {
    const auto k = build_kernel(alpha, LogPowerSvf{0.5});
    const SpectralRule rule(k, 100.0);
    double wsum = 0.0;
    for (double w : rule.weights()) {
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    for (double s : {0.5, 3.0, 40.0, 200.0}) {
      CAPTURE(alpha);
      CAPTURE(s);
      CHECK(std::abs(rule.zero_return(s) - transition_probability(k, {s, 0, 1.0})) < 1e-10);
      for (std::int64_t x : {1, 7, 100}) {
        CHECK(std::abs(rule.difference(x, s) - transition_difference(k, x, s)) < 1e-10);
      }
    }
  }
}

TEST_CASE("space difference bound") {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const std::vector<std::pair<std::int64_t, std::int64_t>> pairs = {
      {0, 0}, {0, 1}, {0, 5}, {3, 2}, {-10, 20}};
  const auto r100 = dllt_bound_check(k, 100.0, pairs);
  const auto r1000 = dllt_bound_check(k, 1000.0, pairs);
  REQUIRE(r100.rows.size() == pairs.size());
  CHECK(r100.rows[0].difference == 0.0);
  CHECK(r100.max_ratio > 0.0);
  CHECK(r1000.max_ratio <= 1.5 * r100.max_ratio);
  // Symmetry of the law: (x, y) and (-x, -y) give the same difference.
  const auto mirror = dllt_bound_check(k, 100.0, {{-3, -2}});
  CHECK(mirror.rows[0].difference == doctest::Approx(r100.rows[3].difference).epsilon(1e-10));
}

TEST_CASE("time difference bound") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  CHECK_THROWS_AS(dtllt_bound_check(k, 100.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dtllt_bound_check(k, 100.0, 20.0), std::invalid_argument);
  const auto a = dtllt_bound_check(k, 100.0, 10.0);
  const auto b = dtllt_bound_check(k, 1000.0, 100.0);
  CHECK(a.ratio > 0.0);
  CHECK(b.ratio <= 1.5 * a.ratio);
}
