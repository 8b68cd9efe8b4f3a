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

#include "coalsim/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace coalsim {

namespace {

GaussLegendre compute_gauss_legendre(std::size_t n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 0 ? 1.0 : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = static_cast<double>(n) * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<GaussLegendre>(compute_gauss_legendre(n));
  }
  return *slot;
}

void ChebyshevPanels::fit(std::size_t panel, const std::vector<double>& samples) {
  const std::size_t n = degree_;
  double* c = coeffs_.data() + panel * n;
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = M_PI * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      sum += samples[k] * std::cos(static_cast<double>(j) * theta);
    }
    c[j] = sum * 2.0 / static_cast<double>(n);
  }
  c[0] *= 0.5;
}

double ChebyshevPanels::operator()(std::size_t panel, double x) const {
  const double a = edges_[panel], b = edges_[panel + 1];
  const double s = (2.0 * x - a - b) / (b - a);
  const double* c = coeffs_.data() + panel * degree_;
  // Clenshaw recurrence.
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = degree_; j-- > 1;) {
    const double t = 2.0 * s * b1 - b2 + c[j];
    b2 = b1;
    b1 = t;
  }
  return s * b1 - b2 + c[0];
}

}  // namespace coalsim
