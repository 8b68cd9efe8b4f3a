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
#include <complex>

#include "coalsim/jump_kernel.hpp"
#include "coalsim/potential.hpp"
#include "doctest.h"

using namespace coalsim;

namespace {

// psi for T(k) = 1/k: Re[(e^{-iu} - 1)(-log(1 - e^{iu}))].
double psi_alpha_one(double u) {
  const double s = std::sin(0.5 * u);
  const std::complex<double> a(-2.0 * s * s, -std::sin(u));
  const std::complex<double> b(2.0 * s * s, -std::sin(u));
  return (a * -std::log(b)).real();
}

// (1/pi) int_0^pi (1 - cos(ux)) / psi(u) du by composite Simpson.
double potential_oracle(std::int64_t x) {
  const int n = 400000;
  const double h = M_PI / n;
  auto f = [x](double u) {
    if (u == 0.0) {
      return 0.0;
    }
    const double s = std::sin(0.5 * u * static_cast<double>(x));
    return 2.0 * s * s / psi_alpha_one(u);
  };
  double sum = f(0.0) + f(M_PI);
  for (int i = 1; i < n; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  }
  return sum * h / 3.0 / M_PI;
}

}  // namespace

TEST_CASE("potential kernel vanishes at the origin and is even") {
  const auto k = build_kernel(0.7, LogPowerSvf{0.5});
  CHECK(potential_kernel(k, 0) == 0.0);
  for (std::int64_t x : {1, 3, 50}) {
    CHECK(potential_kernel(k, x) > 0.0);
    CHECK(potential_kernel(k, -x) == doctest::Approx(potential_kernel(k, x)).epsilon(1e-12));
  }
}

TEST_CASE("potential kernel against an independent quadrature (alpha = 1)") {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  for (std::int64_t x : {1, 2, 10}) {
    CAPTURE(x);
    CHECK(potential_kernel(k, x) == doctest::Approx(potential_oracle(x)).epsilon(1e-7));
  }
}

TEST_CASE("potential kernel is bounded by the cosine inequality") {
  // 1 - cos(a + b) <= 2 (1 - cos a) + 2 (1 - cos b).
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  for (std::int64_t x : {1, 2, 7}) {
    for (std::int64_t y : {1, 4, 30}) {
      CHECK(potential_kernel(k, x + y) <= 2.0 * (potential_kernel(k, x) + potential_kernel(k, y)));
    }
  }
}

TEST_CASE("partial potential: time route and spectral route agree") {
  for (double alpha : {0.5, 1.0}) {
    const auto k = build_kernel(alpha, ConstantSvf{1.0});
    for (double t : {1.0, 10.0, 100.0}) {
      for (std::int64_t x : {1, 5}) {
        CAPTURE(alpha);
        CAPTURE(t);
        CAPTURE(x);
        CHECK(std::abs(potential_kernel_partial(k, x, t) -
                       potential_kernel_partial_spectral(k, x, t)) < 1e-8);
      }
    }
  }
}

TEST_CASE("partial potential increases to the full kernel") {
  const auto k5 = build_kernel(0.5, ConstantSvf{1.0});
  const double a5 = potential_kernel(k5, 1);
  double prev = 0.0;
  for (double t : {1.0, 10.0, 100.0, 1000.0}) {
    const double at = potential_kernel_partial(k5, 1, t);
    CHECK(at > prev);
    CHECK(a5 - at >= -1e-10);
    CHECK(a5 - at <= 10.0 * std::pow(t, -0.8));
    prev = at;
  }
  const auto k1 = build_kernel(1.0, ConstantSvf{1.0});
  CHECK(std::abs(potential_kernel_partial(k1, 1, 1e4) - potential_kernel(k1, 1)) < 1e-2);
}

TEST_CASE("harmonic identity sum_y p(y) a(y) = 1") {
  for (double alpha : {0.5, 1.0}) {
    const auto k = build_kernel(alpha, LogPowerSvf{0.5});
    const auto id = potential_identity(k, 200);
    CAPTURE(alpha);
    CHECK(id.cutoff == 200);
    CHECK(id.truncated_sum > 0.0);
    CHECK(id.remainder > 0.0);
    CHECK(id.total == doctest::Approx(id.truncated_sum + id.remainder).epsilon(1e-14));
    CHECK(std::abs(id.total - 1.0) < 1e-3);
  }
}
