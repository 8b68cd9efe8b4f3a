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


#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "coalsim/hitting_mc.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/scaling.hpp"
#include "coalsim/stable_model.hpp"
#include "coalsim/walk_ensemble.hpp"
#include "doctest.h"

using namespace coalsim;

namespace {

bool close(const Estimate& a, const Estimate& b, double sigmas = 4.0) {
  return std::abs(a.mean - b.mean) <=
         sigmas * std::hypot(a.std_error, b.std_error) + 1e-12;
}

}  // namespace

TEST_CASE("hitting curve: time zero, monotone, worker invariant") {
  const auto k = build_kernel(0.7, ConstantSvf{1.0});
  const std::vector<double> times = {0.0, 1.0, 5.0, 20.0};
  const auto c1 = mc_hitting_curve(k, 2, times, 20000, 11);
  REQUIRE(c1.survival.size() == times.size());
  CHECK(c1.survival[0].mean == 1.0);
  CHECK(c1.survival[0].std_error == 0.0);
  for (std::size_t i = 1; i < times.size(); ++i) {
    CHECK(c1.survival[i].mean <= c1.survival[i - 1].mean);
  }
  const auto c3 = mc_hitting_curve(k, 2, times, 20000, 11, 3);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(c3.survival[i].mean == c1.survival[i].mean);
    CHECK(c3.survival[i].std_error == c1.survival[i].std_error);
  }
  CHECK_FALSE(c1.truncated);
}

TEST_CASE("hitting tail estimator input checks") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  CHECK_THROWS_AS(mc_hitting_tail(k, 0, 1.0, 10000, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_hitting_tail(k, 1, 1.0, 10, 1), std::invalid_argument);
  const auto r = mc_hitting_tail(k, 1, 0.0, 1000, 1);
  CHECK(r.estimate.mean == 1.0);
  CHECK(r.estimate.std_error == 0.0);
}

TEST_CASE("far start hitting probability is small") {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const auto model = build_model(0.5, ConstantSvf{1.0});
  const auto sc = build_scaling(model, k, 200.0);
  CHECK_THROWS_AS(far_start_check(k, sc, 2.5, 100.0, 1000, 1), std::invalid_argument);
  const auto rep = far_start_check(k, sc, 1.0, 100.0, 20000, 3);
  CHECK(rep.x >= 1);
  CHECK(rep.hit_probability.mean <= 10.0 * rep.bound);
  CHECK(rep.pass);
}

TEST_CASE("non-collision: time zero and input checks") {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const std::vector<double> times = {0.0, 1.0};
  const std::vector<std::int64_t> one = {0};
  const std::vector<std::int64_t> dup = {4, 4};
  CHECK_THROWS_AS(mc_noncollision(k, one, times, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_noncollision(k, dup, times, 100, 1), std::invalid_argument);
  const std::vector<std::int64_t> x = {0, 1, 5};
  const auto r = mc_noncollision(k, x, times, 2000, 1);
  CHECK(r.survival[0].mean == 1.0);
  CHECK(r.survival[0].std_error == 0.0);
  REQUIRE(r.tau.size() == 2000);
  REQUIRE(r.replica.size() == 2000);
  for (std::size_t i = 0; i < r.replica.size(); ++i) {
    REQUIRE(r.replica[i] == i);
  }
}

TEST_CASE("non-collision: worker and permutation invariance") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  const std::vector<double> times = {1.0, 10.0};
  const std::vector<std::int64_t> x = {0, 2, 7};
  const auto a = mc_noncollision(k, x, times, 20000, 5, 1);
  const auto b = mc_noncollision(k, x, times, 20000, 5, 4);
  CHECK(a.tau == b.tau);
  const std::vector<std::int64_t> perm = {7, 0, 2};
  const auto c = mc_noncollision(k, perm, times, 20000, 6, 2);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(a.survival[i].mean == b.survival[i].mean);
    CHECK(close(a.survival[i], c.survival[i]));
  }
}

TEST_CASE("two walks collide like one walk at double rate hits the gap") {
  const auto k = build_kernel(0.7, LogPowerSvf{0.5});
  const std::vector<double> times = {5.0};
  const std::vector<std::int64_t> x = {0, 3};
  const auto pair = mc_noncollision(k, x, times, 40000, 8);
  const auto single = mc_hitting_curve(k, 3, times, 40000, 9, 1, StreamPurpose::kTest, 2.0);
  CHECK(close(pair.survival[0], single.survival[0]));
  const auto tau = collision_time(k, std::vector<std::int64_t>{0, 3},
                                  std::vector<std::uint32_t>{0, 1}, 8, 0,
                                  StreamPurpose::kTest, 5.0);
  CHECK(tau.positions.size() == 2);
  CHECK_THROWS_AS(collision_time(k, std::vector<std::int64_t>{0, 3},
                                 std::vector<std::uint32_t>{0}, 8, 0, StreamPurpose::kTest, 5.0),
                  std::invalid_argument);
}

TEST_CASE("independence diagnostic") {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const auto at_zero = mc_joint_independence(k, {0, 1}, 0.0, 1.0, 1.0, 2000, 1);
  CHECK(at_zero.discrepancy == doctest::Approx(0.0).epsilon(1e-15));
  const auto ctl = mc_joint_independence(k, {0, 1}, 10.0, 1.0, 100.0, 20000, 2, 1, true);
  CHECK(ctl.control);
  CHECK(ctl.buckets > 0);
  CHECK(ctl.discrepancy <= 3.0 * ctl.std_error);
  CHECK_THROWS_AS(mc_joint_independence(k, {1, 1}, 1.0, 1.0, 1.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(mc_joint_independence(k, {0, 1}, 1.0, 0.0, 1.0, 100, 1),
                  std::invalid_argument);
}
