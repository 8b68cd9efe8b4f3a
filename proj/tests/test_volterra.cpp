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

#include "coalsim/estimate.hpp"
#include "coalsim/hitting_mc.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/potential.hpp"
#include "coalsim/scaling.hpp"
#include "coalsim/stable_model.hpp"
#include "coalsim/volterra.hpp"
#include "doctest.h"

using namespace coalsim;

namespace {

// int_0^1 e^{-z s} w(s) ds by composite Simpson.
template <class W>
double weight_oracle(double z, W w) {
  const int n = 20000;
  const double h = 1.0 / n;
  double sum = w(0.0) + std::exp(-z) * w(1.0);
  for (int i = 1; i < n; ++i) {
    const double s = i * h;
    sum += (i % 2 ? 4.0 : 2.0) * std::exp(-z * s) * w(s);
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("exponential cell weights") {
  for (double z : {0.0, 1e-8, 0.3, 0.499, 0.5, 0.501, 2.0, 50.0}) {
    CAPTURE(z);
    const double a = weight_oracle(z, [](double s) { return 1.0 - s; });
    const double b = weight_oracle(z, [](double s) { return s; });
    CHECK(detail::cell_weight_a(z) == doctest::Approx(a).epsilon(1e-12));
    CHECK(detail::cell_weight_b(z) == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("solver input checks") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  CHECK_THROWS_AS(solve_j(k, 10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_j(k, 10.0, 1.0), std::invalid_argument);
  const auto g = solve_j(k, 10.0, 0.05);
  CHECK_THROWS_AS(g.j(11.0), std::out_of_range);
  CHECK_THROWS_AS(hitting_tail(k, 0, 1.0, g), std::invalid_argument);
}

TEST_CASE("j starts at one and stays in the unit interval") {
  for (double alpha : {0.5, 1.0}) {
    const auto k = build_kernel(alpha, LogPowerSvf{0.5});
    const double step = 0.02;
    const auto g = solve_j(k, 20.0, step);
    CHECK(g.residual_ok());
    CHECK(g.j(0.0) == doctest::Approx(1.0).epsilon(1e-9));
    double prev = 2.0;
    for (double v : g.j_values) {
      CHECK(v > 0.0);
      CHECK(v <= 1.0 + 5.0 * step);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("j against a first-passage Monte Carlo oracle") {
  // j(t) = sum_x p(x) P(tau_x > t): start the walk at an independent jump.
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const auto g = solve_j(k, 20.0, 0.02);
  const double t = 10.0;
  PhiloxStream rng(99, stream_id(StreamPurpose::kTest, 3));
  Welford w;
  for (int i = 0; i < 200000; ++i) {
    const wide_int x = k.sample(rng);
    const auto fp = first_passage(k, x, t, rng);
    w.add(fp.tau > t ? 1.0 : 0.0);
  }
  const auto e = w.estimate();
  CHECK(std::abs(g.j(t) - e.mean) < 4.0 * e.std_error + 1e-3);
}

TEST_CASE("hitting tail from the solver") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  const auto g = solve_j(k, 20.0, 0.02);
  CHECK(hitting_tail(k, 3, 0.0, g) == doctest::Approx(1.0).epsilon(1e-12));
  double prev = 1.0;
  for (double t = 0.5; t <= 20.0; t += 0.5) {
    const double h = hitting_tail(k, 3, t, g);
    CHECK(h <= prev + 1e-12);
    CHECK(h >= 0.0);
    prev = h;
  }
  const auto mc = mc_hitting_tail(k, 3, 10.0, 100000, 5);
  CHECK(std::abs(hitting_tail(k, 3, 10.0, g) - mc.estimate.mean) <
        4.0 * mc.estimate.std_error + 1e-3);
}

TEST_CASE("normalized j approaches one for alpha = 1") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  const auto model = build_model(1.0, ConstantSvf{1.0});
  const auto sc = build_scaling(model, k, 1000.0);
  const auto g = solve_j(k, 1000.0, 0.1);
  const double v100 = model.density_at_zero * sc.l(100.0) * g.j(100.0);
  const double v1000 = model.density_at_zero * sc.l(1000.0) * g.j(1000.0);
  CHECK(v1000 >= 0.8);
  CHECK(v1000 <= 1.0);
  CHECK(std::abs(1.0 - v1000) < std::abs(1.0 - v100));
}

TEST_CASE("asymptotic hitting tail") {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const auto model = build_model(0.5, ConstantSvf{1.0});
  const auto sc = build_scaling(model, k, 1e4);
  CHECK(hitting_tail_theory(model, sc, 2.0, 100.0) ==
        doctest::Approx(2.0 * hitting_tail_theory(model, sc, 1.0, 100.0)).epsilon(1e-14));
  CHECK(hitting_tail_theory(model, sc, 1.0, 1000.0) < hitting_tail_theory(model, sc, 1.0, 100.0));
  // l(t) converges for alpha < 1, so the tail flattens.
  const double r = hitting_tail_theory(model, sc, 1.0, 1e3) / hitting_tail_theory(model, sc, 1.0, 1e4);
  CHECK(r - 1.0 < 0.01);
  CHECK(hitting_tail_theory(model, sc, k, 5, 100.0) ==
        doctest::Approx(hitting_tail_theory(model, sc, potential_kernel(k, 5), 100.0)));
}
