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

#include "coalsim/stable_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "coalsim/quadrature.hpp"

namespace coalsim {

double stable_gamma(double alpha) {
  if (alpha == 1.0) {
    return M_PI / 2.0;
  }
  return std::cos(M_PI * alpha / 2.0) * std::tgamma(1.0 - alpha);
}

double stable_density_at_zero_closed_form(double alpha, double gamma) {
  return std::tgamma(1.0 + 1.0 / alpha) / (M_PI * std::pow(gamma, 1.0 / alpha));
}

StableModel build_model(double alpha, SvfSpec svf) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  validate_svf(svf);
  StableModel model;
  model.alpha = alpha;
  model.svf = svf;
  model.gamma = stable_gamma(alpha);
  model.density_at_zero = stable_density_at_zero_closed_form(alpha, model.gamma);
  return model;
}

double stable_density(const StableModel& model, double z) {
  const double az = std::abs(z);
  const double alpha = model.alpha;
  const double gamma = model.gamma;
  // exp(-gamma U^alpha) = 1e-14 beyond the cut.
  const double cut = std::pow(32.3 / gamma, 1.0 / alpha);

  std::vector<double> breaks{0.0};
  for (int k = 48; k >= 1; --k) {
    breaks.push_back(cut * std::ldexp(1.0, -k));
  }
  if (az > 1.0) {
    const double period = M_PI / az;
    for (double u = 0.5 * period; u < cut; u += period) {
      breaks.push_back(u);
    }
  }
  breaks.push_back(cut);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  AdaptiveOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-13;
  const auto res = integrate(
      [&](double u) { return std::cos(az * u) * std::exp(-gamma * std::pow(u, alpha)); },
      std::span<const double>(breaks), opt);
  return res.value / M_PI;
}

double stable_upper_tail(const StableModel& model, double z) {
  const double alpha = model.alpha;
  const double gamma = model.gamma;
  if (alpha == 1.0) {
    return 0.5 - std::atan(z / gamma) / M_PI;
  }
  if (!(z > std::pow(gamma, 1.0 / alpha))) {
    throw std::domain_error("stable_upper_tail: series requires z > gamma^(1/alpha)");
  }
  double sum = 0.0;
  const double log_ratio = std::log(gamma) - alpha * std::log(z);
  for (int k = 1; k < 400; ++k) {
    const double log_mag = std::lgamma(k * alpha) - std::lgamma(k + 1.0) + k * log_ratio;
    const double term = std::exp(log_mag) * std::sin(k * M_PI * alpha / 2.0);
    sum += (k % 2 == 1) ? term : -term;
    if (std::exp(log_mag) < 1e-18 * std::abs(sum)) {
      break;
    }
  }
  return sum / M_PI;
}

}  // namespace coalsim
