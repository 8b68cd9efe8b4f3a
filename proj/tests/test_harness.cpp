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
#include <sstream>
#include <string>
#include <vector>

#include "coalsim/config.hpp"
#include "coalsim/estimate.hpp"
#include "coalsim/experiments.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/report.hpp"
#include "coalsim/scaling.hpp"
#include "coalsim/stable_model.hpp"
#include "coalsim/verify.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace coalsim;

namespace {

std::string key_of_error(const std::string& text) {
  try {
    validate(parse_config(text));
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

ExperimentConfig small_density() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kDensity;
  c.torus_size = 4096;
  c.t_min = 1.0;
  c.t_max = 10.0;
  c.replicas = 6;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(
      "# comment\n"
      "model.alpha = 0.7\n"
      "model.svf.family = logpower\n"
      "model.svf.param = 0.5\n"
      "experiment = noncollision\n"
      "replicas = 1e4\n"
      "walks.start = 0;2;9\n"
      "npoint.offsets = 0;1 | 0;3;4\n");
  CHECK(c.alpha == 0.7);
  CHECK(c.svf_family == "logpower");
  CHECK(c.experiment == ExperimentKind::kNoncollision);
  CHECK(c.replicas == 10000);
  CHECK(c.walks_start == std::vector<std::int64_t>{0, 2, 9});
  REQUIRE(c.npoint_offsets.size() == 2);
  CHECK(c.npoint_offsets[1] == std::vector<std::int64_t>{0, 3, 4});
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("config errors name the offending key") {
  CHECK(key_of_error("replicas = 0\n") == "replicas");
  CHECK(key_of_error("torus.sise = 10\n") == "torus.sise");
  CHECK(key_of_error("model.alpha = 1.5\n") == "model.alpha");
  CHECK(key_of_error("seed = 1\nseed = 2\n") == "seed");
  CHECK(key_of_error("walks.start = 3;3\n") == "walks.start");
  CHECK(key_of_error("seed = 1\n") == "");
  CHECK_THROWS_AS(load_config("/nonexistent/coalsim.cfg"), ConfigError);
}

TEST_CASE("config echo round trip") {
  auto c = parse_config("model.alpha = 0.6\nnpoint.offsets = 0;1|0;5\nhitting.sites = 2;3\n");
  const auto echo = config_echo(c);
  std::ostringstream text;
  for (const auto& [k, v] : echo) {
    text << k << " = " << v << "\n";
  }
  const auto again = parse_config(text.str());
  CHECK(config_echo(again) == echo);
}

TEST_CASE("checkpoint grid") {
  ExperimentConfig c;
  c.t_min = 10.0;
  c.t_max = 100.0;
  const auto t = c.checkpoints();
  REQUIRE(t.size() == 3);
  CHECK(t.front() == 10.0);
  CHECK(t.back() == 100.0);
  CHECK(t[1] == doctest::Approx(std::sqrt(1000.0)));
}

TEST_CASE("estimate algebra") {
  const Estimate a{2.0, 0.1, 100}, b{3.0, 0.2, 100};
  const auto p = product(a, b);
  CHECK(p.mean == 6.0);
  CHECK(p.std_error == doctest::Approx(std::hypot(3.0 * 0.1, 2.0 * 0.2)).epsilon(1e-12));
  const auto q = quotient(Estimate{6.0, 0.3, 100}, Estimate{3.0, 0.1, 100});
  CHECK(q.mean == 2.0);
  CHECK(q.std_error == doctest::Approx(2.0 * std::hypot(0.05, 0.1 / 3.0)).epsilon(1e-12));
  const auto w = power(a, 3);
  CHECK(w.mean == doctest::Approx(8.0));
  CHECK(w.std_error == doctest::Approx(3.0 * 4.0 * 0.1).epsilon(1e-12));

  Welford all, left, right;
  for (int i = 0; i < 100; ++i) {
    const double v = std::sin(i * 1.3);
    all.add(v);
    (i < 37 ? left : right).add(v);
  }
  left.merge(right);
  CHECK(left.count() == all.count());
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("comparison rows") {
  const auto r = make_row("x", 1.0, Estimate{1.1, 0.05, 10}, 1.0);
  CHECK(r.ratio == doctest::Approx(1.1));
  CHECK(r.ratio_ci_low == doctest::Approx(1.1 - 1.96 * 0.05));
  CHECK(ratio_verdict(r, 0.9, 1.2) == Verdict::kPass);
  CHECK(ratio_verdict(r, 0.5, 1.05) == Verdict::kFail);
  CHECK(std::isnan(make_row("y", 1.0, Estimate{1.0, 0.0, 1}, 0.0).ratio));
  CHECK(pair_count(2) == 1);
  CHECK(pair_count(4) == 6);
}

TEST_CASE("density theory and the plateau fit") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  const auto model = build_model(1.0, ConstantSvf{1.0});
  const auto sc = build_scaling(model, k, 2020.0);
  CHECK(density_theory(model, sc, 50.0) ==
        doctest::Approx(model.density_at_zero * sc.l(100.0) / 50.0).epsilon(1e-14));

  const std::vector<double> times = {10.0, 31.6, 100.0, 316.0, 1000.0};
  std::vector<Estimate> curve;
  for (double t : times) {
    const double l = sc.l(2.0 * t);
    curve.push_back({2.0 / l, 0.01 / l, 1000});
  }
  const auto fit = fit_noncollision_constant(times, curve, sc, 2);
  CHECK(fit.c_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(fit.drift) < 1e-12);
  CHECK(std::abs(fit.decade_change) < 1e-12);
  CHECK(fit.pass);
  CHECK_FALSE(fit.insufficient_survivors);
  CHECK_THROWS_AS(fit_noncollision_constant(std::span(times).first(3),
                                            std::span(curve).first(3), sc, 2),
                  std::invalid_argument);
}

TEST_CASE("n-point report") {
  const std::vector<double> times = {1.0, 2.0};
  const std::vector<Estimate> rho = {{0.5, 0.01, 10}, {0.25, 0.01, 10}};
  const std::vector<Estimate> nc = {{0.8, 0.01, 10}, {0.6, 0.01, 10}};
  const std::vector<Estimate> one = {{1.0, 0.0, 10}, {1.0, 0.0, 10}};
  // N = 1: rho_1 against rho_1 itself.
  const auto r1 = npoint_report(times, rho, one, rho, 1, 0.5, 2.0);
  for (const auto& r : r1) {
    CHECK(r.ratio == doctest::Approx(1.0));
    CHECK(r.verdict == Verdict::kPass);
  }
  const std::vector<Estimate> exact = {{0.2, 0.01, 10}, {0.009375, 0.0005, 10}};
  const auto r3 = npoint_report(times, rho, nc, exact, 3, 0.5, 2.0);
  CHECK(r3[0].ratio == doctest::Approx(0.2 / (0.125 * 0.8)));
  CHECK(r3[1].ratio == doctest::Approx(1.0));
  CHECK_THROWS_AS(npoint_report(times, rho, nc, std::span(exact).first(1), 3, 0.5, 2.0),
                  std::invalid_argument);
}

TEST_CASE("experiment outputs do not depend on the worker count") {
  auto c = small_density();
  c.workers = 1;
  const auto a = execute_experiment(c);
  c.workers = 3;
  const auto b = execute_experiment(c);
  CHECK(a.files == b.files);
  CHECK(a.files.count("density.csv") == 1);

  const auto j = nlohmann::json::parse(summary_json(c, a));
  CHECK(j.contains("criteria"));
  CHECK(j.contains("passed"));
  CHECK(j["criteria"].size() == a.rows.size());
}

TEST_CASE("kernel dump and number formatting") {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const auto csv = kernel_dump_csv(k, 1000);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,p");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
  }
  CHECK(n == 2001);
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("stable constants criterion detects a perturbed fixture") {
  VerifyOptions o;
  CHECK(verify_stable_constants(o).pass);
  o.gamma_fixture_scale = 1.01;
  CHECK_FALSE(verify_stable_constants(o).pass);
}
