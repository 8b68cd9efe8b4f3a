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
#include "coalsim/quadrature.hpp"
#include "coalsim/scaling.hpp"
#include "coalsim/stable_model.hpp"
#include "coalsim/svf.hpp"
#include "coalsim/transition.hpp"
#include "doctest.h"

using namespace coalsim;

namespace {

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST_CASE("slowly varying functions: values") {
  CHECK(svf_eval(ConstantSvf{1.0}, 1e6) == 1.0);
  CHECK(svf_eval(LogPowerSvf{0.5}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel(svf_eval(ExpLogPowerSvf{0.5}, std::exp(100.0) - std::exp(1.0)), std::exp(-10.0)) <
        1e-12);
  for (const SvfSpec s : {SvfSpec{ConstantSvf{2.0}}, SvfSpec{LogPowerSvf{-0.5}},
                          SvfSpec{ExpLogPowerSvf{0.3}}}) {
    for (double x : {0.0, 1.0, 1e3, 1e12}) {
      CHECK(svf_eval(s, x) > 0.0);
    }
  }
}

TEST_CASE("slowly varying functions: L(cx)/L(x) -> 1 on a geometric grid") {
  for (const SvfSpec s : {SvfSpec{LogPowerSvf{0.5}}, SvfSpec{ExpLogPowerSvf{0.5}}}) {
    double prev = 1e300;
    for (double x = 1e2; x <= 1e14; x *= 100) {
      const double gap = std::abs(svf_eval(s, 10.0 * x) / svf_eval(s, x) - 1.0);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 0.35);
  }
}

TEST_CASE("slowly varying functions: complex continuation matches on the real axis") {
  for (const SvfSpec s : {SvfSpec{ConstantSvf{1.5}}, SvfSpec{LogPowerSvf{0.5}},
                          SvfSpec{ExpLogPowerSvf{0.5}}}) {
    for (double x : {0.0, 3.0, 1e5}) {
      const auto z = svf_eval(s, std::complex<double>(x, 0.0));
      CHECK(std::abs(z.real() / svf_eval(s, x) - 1.0) < 1e-14);
      CHECK(std::abs(z.imag()) < 1e-14);
    }
  }
}

TEST_CASE("slowly varying functions: invalid parameters are rejected") {
  CHECK_THROWS_AS(validate_svf(ConstantSvf{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_svf(LogPowerSvf{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_svf(ExpLogPowerSvf{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_svf(ExpLogPowerSvf{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_svf("powerlaw", 1.0), std::invalid_argument);
  CHECK(svf_family(make_svf("logpower", 0.25)) == "logpower");
  CHECK(svf_parameter(make_svf("explogpower", 0.25)) == 0.25);
}

TEST_CASE("stable model constants") {
  const auto m1 = build_model(1.0, ConstantSvf{1.0});
  CHECK(m1.gamma == doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(rel(m1.density_at_zero, 2.0 / (M_PI * M_PI)) < 1e-14);
  const auto m5 = build_model(0.5, ConstantSvf{1.0});
  CHECK(rel(m5.gamma, std::cos(M_PI / 4) * std::sqrt(M_PI)) < 1e-14);
  CHECK(rel(m5.density_at_zero, 4.0 / (M_PI * M_PI)) < 1e-14);
  CHECK_THROWS_AS(build_model(0.0, ConstantSvf{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_model(1.2, ConstantSvf{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_model(0.5, LogPowerSvf{2.0}), std::invalid_argument);
}

TEST_CASE("stable density at zero agrees with the closed form") {
  for (double alpha : {0.3, 0.5, 0.7, 0.9, 1.0}) {
    const auto m = build_model(alpha, ConstantSvf{1.0});
    CHECK(rel(stable_density(m, 0.0), m.density_at_zero) < 1e-8);
  }
}

TEST_CASE("alpha = 1 stable density is Cauchy with scale pi/2") {
  const auto m = build_model(1.0, ConstantSvf{1.0});
  const double g = M_PI / 2;
  for (double z : {0.5, 1.0, 2.0, 10.0, 40.0}) {
    const double cauchy = 1.0 / (M_PI * g) / (1.0 + (z / g) * (z / g));
    CHECK(rel(stable_density(m, z), cauchy) < 1e-9);
    CHECK(rel(stable_upper_tail(m, z), 0.5 - std::atan(z / g) / M_PI) < 1e-12);
  }
}

TEST_CASE("stable density is symmetric and integrates to one") {
  const auto m = build_model(0.7, ConstantSvf{1.0});
  for (double z : {0.3, 2.0, 11.0}) {
    CHECK(stable_density(m, z) == stable_density(m, -z));
  }
  // Mass on [-20, 20] plus both tails.
  const std::vector<double> br{0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
  const auto body = integrate([&](double z) { return stable_density(m, z); },
                              std::span<const double>(br), {1e-12, 1e-11, 20000});
  CHECK(std::abs(2.0 * body.value + 2.0 * stable_upper_tail(m, 20.0) - 1.0) < 1e-8);
}

TEST_CASE("stable upper tail: leading power law for alpha = 0.5") {
  const auto m = build_model(0.5, ConstantSvf{1.0});
  const double z = 1e6;
  const double lead = m.gamma * std::tgamma(0.5) * std::sin(M_PI / 4) / M_PI / std::sqrt(z);
  CHECK(rel(stable_upper_tail(m, z), lead) < 2e-3);
}

TEST_CASE("scaling functions: small-time and transient limits") {
  const auto kernel = build_kernel(0.5, ConstantSvf{1.0});
  const auto model = build_model(0.5, ConstantSvf{1.0});
  const auto s = build_scaling(model, kernel, 1.1e4);
  CHECK(s.t_min() <= 1e-4);
  CHECK(rel(s.b(1e-4), model.density_at_zero) < 0.01);
  CHECK(s.l(1e4) / s.l(1e3) - 1.0 < 0.01);
  for (std::size_t i = 1; i < s.time_grid.size(); ++i) {
    CHECK(s.l_values[i] >= s.l_values[i - 1]);
    CHECK(s.b_values[i] > 0.0);
  }
  // l-script is (1/alpha - 1)-regularly varying: a factor 10 in time gives ~10.
  const double growth = script_ell(s, 1e3) / script_ell(s, 1e2);
  CHECK(std::abs(growth / 10.0 - 1.0) < 0.2);
  for (double t : {1.0, 37.0, 900.0}) {
    CHECK(rel(script_ell(s, t) * t / s.b(t), s.l(t)) < 1e-14);
  }
  CHECK_THROWS_AS(s.l(2e4), std::out_of_range);
}

TEST_CASE("scaling functions: l(t) against direct integration of the return probability") {
  const auto kernel = build_kernel(0.7, LogPowerSvf{0.5});
  const auto model = build_model(0.7, LogPowerSvf{0.5});
  const auto s = build_scaling(model, kernel, 120.0);
  auto direct = [&](double t_end) {
    const std::vector<double> br{0.0, 1.0, 10.0, t_end};
    return integrate(
               [&](double t) {
                 return transition_probability(kernel, {t, 0}) / model.density_at_zero;
               },
               std::span<const double>(br), {1e-12, 1e-10, 20000})
        .value;
  };
  // Grid node: quadrature only. Off-node: log-log interpolation as well.
  CHECK(rel(s.l(120.0), direct(120.0)) < 1e-7);
  CHECK(rel(s.l(100.0), direct(100.0)) < 1e-5);
}

TEST_CASE("scaling functions: alpha = 1 space scale is close to linear") {
  const auto kernel = build_kernel(1.0, ConstantSvf{1.0});
  const auto model = build_model(1.0, ConstantSvf{1.0});
  const auto s = build_scaling(model, kernel, 1.1e4);
  double lo = 1e300, hi = 0;
  for (double t = 1e2; t <= 1e4 * 1.0001; t *= std::pow(10.0, 0.25)) {
    lo = std::min(lo, s.b(t) / t);
    hi = std::max(hi, s.b(t) / t);
  }
  CHECK(std::log(hi / lo) / std::log(100.0) < 0.05);
  CHECK(script_ell(s, 1e4) >= script_ell(s, 1e3));
  // l(2t)/ln t settles on a geometric grid.
  double prev_gap = 1e300;
  double prev = s.l(2e1) / std::log(1e1);
  for (double t = 1e2; t <= 5e3; t *= 10) {
    const double cur = s.l(2 * t) / std::log(t);
    const double gap = std::abs(cur - prev);
    CHECK(gap < prev_gap);
    prev_gap = gap;
    prev = cur;
  }
  CHECK_THROWS_AS(build_scaling(model, kernel, 10.0, 8), std::invalid_argument);
}

TEST_CASE("class B diagnostic") {
  const std::vector<double> grid{1e2, 1e3, 1e4, 1e5, 1e6};
  {
    const auto k = build_kernel(1.0, LogPowerSvf{0.5});
    const auto m = build_model(1.0, LogPowerSvf{0.5});
    const auto s = build_scaling(m, k, 1.01e6);
    CHECK(class_b_report(s, 0.9, grid).tail_pass);
    // At K = 0.6 > 1 - a the margin only opens at very large t; it must widen.
    const auto r = class_b_report(s, 0.6, grid);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      CHECK(r.rows[i].ell_pow_k / r.rows[i].l > r.rows[i - 1].ell_pow_k / r.rows[i - 1].l);
    }
  }
  {
    const auto k = build_kernel(1.0, ExpLogPowerSvf{0.5});
    const auto m = build_model(1.0, ExpLogPowerSvf{0.5});
    const auto s = build_scaling(m, k, 1.01e6);
    CHECK_FALSE(class_b_report(s, 2.0, grid).tail_pass);
  }
  {
    const auto k = build_kernel(0.5, ConstantSvf{1.0});
    const auto m = build_model(0.5, ConstantSvf{1.0});
    const auto s = build_scaling(m, k, 1.01e6);
    CHECK(class_b_report(s, 1.0, grid).tail_pass);
  }
}
