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

#include "coalsim/transition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coalsim {

namespace {

constexpr double kDeadExponent = 800.0;

// Panel edges for an integrand carrying exp(-rt psi) and a cos(x u) factor.
std::vector<double> inversion_breaks(const JumpKernel& kernel, double rt, double ax) {
  const auto base = kernel.psi_breaks();
  std::vector<double> br{base[0]};
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const double a = base[i], b = base[i + 1];
    const bool live = rt * kernel.psi_panel_min(i) < kDeadExponent;
    if (live && ax * (b - a) > 8.0 * M_PI) {
      const double period = M_PI / ax;
      double u = (std::floor(a / period - 0.5) + 1.5) * period;
      for (; u < b; u += period) {
        if (u > a) {
          br.push_back(u);
        }
      }
    }
    br.push_back(b);
  }
  return br;
}

double checked(const QuadResult<double>& r, const char* what) {
  if (r.error > 1e-9) {
    throw QuadratureError(std::string(what) + ": error bound " + std::to_string(r.error) +
                              " above 1e-9",
                          r.error);
  }
  return r.value;
}

}  // namespace

double transition_probability(const JumpKernel& kernel, const TransitionQuery& q) {
  if (q.t == 0.0) {
    return q.x == 0 ? 1.0 : 0.0;
  }
  const double rt = q.rate * q.t;
  const double x = static_cast<double>(q.x);
  const auto br = inversion_breaks(kernel, rt, std::abs(x));
  AdaptiveOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-10;
  const auto r = integrate(
      [&](double u) { return std::cos(x * u) * std::exp(-rt * kernel.psi_cached(u)); },
      std::span<const double>(br), opt);
  return std::clamp(checked(r, "transition_probability") / M_PI, 0.0, 1.0);
}

double transition_difference(const JumpKernel& kernel, std::int64_t x, double t, double rate) {
  if (x == 0) {
    return 0.0;
  }
  if (t == 0.0) {
    return 1.0;
  }
  const double rt = rate * t;
  const double xd = static_cast<double>(x);
  const auto br = inversion_breaks(kernel, rt, std::abs(xd));
  AdaptiveOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-10;
  const auto r = integrate(
      [&](double u) {
        const double s = std::sin(0.5 * xd * u);
        return 2.0 * s * s * std::exp(-rt * kernel.psi_cached(u));
      },
      std::span<const double>(br), opt);
  return std::clamp(checked(r, "transition_difference") / M_PI, 0.0, 1.0);
}

SpectralRule::SpectralRule(const JumpKernel& kernel, double max_x, std::size_t points_per_panel) {
  const auto& gl = gauss_legendre(points_per_panel);
  const auto base = kernel.psi_breaks();
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const double a = base[i], b = base[i + 1];
    const int pieces =
        max_x > 0.0 ? std::max(1, static_cast<int>(std::ceil(max_x * (b - a) / M_PI))) : 1;
    for (int p = 0; p < pieces; ++p) {
      const double lo = a + (b - a) * p / pieces;
      const double hi = a + (b - a) * (p + 1) / pieces;
      const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double u = c + h * gl.nodes[k];
        nodes_.push_back(u);
        weights_.push_back(h * gl.weights[k] / M_PI);
        psi_.push_back(kernel.psi_cached(u));
      }
    }
  }
}

double SpectralRule::zero_return(double s) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    sum += weights_[i] * std::exp(-s * psi_[i]);
  }
  return sum;
}

double SpectralRule::difference(std::int64_t x, double s) const {
  const double xd = static_cast<double>(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double h = std::sin(0.5 * xd * nodes_[i]);
    sum += weights_[i] * 2.0 * h * h * std::exp(-s * psi_[i]);
  }
  return sum;
}

std::vector<double> SpectralRule::difference_weights(std::int64_t x) const {
  const double xd = static_cast<double>(x);
  std::vector<double> w(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double h = std::sin(0.5 * xd * nodes_[i]);
    w[i] = weights_[i] * 2.0 * h * h;
  }
  return w;
}

}  // namespace coalsim
