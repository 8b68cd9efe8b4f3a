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

#include "coalsim/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coalsim/quadrature.hpp"
#include "coalsim/transition.hpp"

namespace coalsim {

namespace {

double loglog_interp(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
  const double lo = ts.front(), hi = ts.back();
  if (!(t >= lo * (1.0 - 1e-12) && t <= hi * (1.0 + 1e-12))) {
    throw std::out_of_range("time " + std::to_string(t) + " outside scaling grid [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  t = std::clamp(t, lo, hi);
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
  i = std::min(i, ts.size() - 2);
  const double w = std::log(t / ts[i]) / std::log(ts[i + 1] / ts[i]);
  return std::exp((1.0 - w) * std::log(vs[i]) + w * std::log(vs[i + 1]));
}

}  // namespace

double ScalingFunctions::b(double t) const { return loglog_interp(time_grid, b_values, t); }

double ScalingFunctions::l(double t) const { return loglog_interp(time_grid, l_values, t); }

ScalingFunctions build_scaling(const StableModel& model, const ZeroReturn& zero_return,
                               double t_max, std::size_t grid_points) {
  if (grid_points < 16) {
    throw std::invalid_argument("grid_points must be at least 16");
  }
  if (!(t_max > 0.0)) {
    throw std::invalid_argument("t_max must be positive");
  }
  ScalingFunctions s;
  s.density_at_zero = model.density_at_zero;
  const double t0 = std::min(1e-5, t_max / 10.0);
  const double log_ratio = std::log(t_max / t0) / static_cast<double>(grid_points - 1);
  s.time_grid.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    s.time_grid[i] = t0 * std::exp(log_ratio * static_cast<double>(i));
  }
  s.time_grid.back() = t_max;

  const double g0 = model.density_at_zero;
  const auto& gl = gauss_legendre(8);
  // 1/B_s = P(X_s = 0) / g(0).
  auto inv_b = [&](double t) { return zero_return(t) / g0; };

  double l = 0.0;
  {
    const double h = 0.5 * t0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      l += h * gl.weights[k] * inv_b(h * (1.0 + gl.nodes[k]));
    }
  }
  s.b_values.resize(grid_points);
  s.l_values.resize(grid_points);
  s.b_values[0] = g0 / zero_return(t0);
  s.l_values[0] = l;
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double la = std::log(s.time_grid[i - 1]), lb = std::log(s.time_grid[i]);
    const double c = 0.5 * (la + lb), h = 0.5 * (lb - la);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double t = std::exp(c + h * gl.nodes[k]);
      l += h * gl.weights[k] * t * inv_b(t);
    }
    s.l_values[i] = l;
    s.b_values[i] = g0 / zero_return(s.time_grid[i]);
  }
  return s;
}

ScalingFunctions build_scaling(const StableModel& model, const JumpKernel& kernel, double t_max,
                               std::size_t grid_points) {
  return build_scaling(
      model, [&](double t) { return transition_probability(kernel, {t, 0, 1.0}); }, t_max,
      grid_points);
}

double script_ell(const ScalingFunctions& scaling, double t) {
  return scaling.b(t) * scaling.l(t) / t;
}

ClassBReport class_b_report(const ScalingFunctions& scaling, double K,
                            std::span<const double> t_grid) {
  ClassBReport rep;
  rep.K = K;
  for (double t : t_grid) {
    ClassBRow row;
    row.t = t;
    row.l = scaling.l(t);
    row.ell_pow_k = std::pow(script_ell(scaling, t), K);
    row.pass = row.ell_pow_k >= row.l;
    rep.rows.push_back(row);
  }
  rep.tail_pass = !rep.rows.empty();
  for (std::size_t i = rep.rows.size() / 2; i < rep.rows.size(); ++i) {
    rep.tail_pass = rep.tail_pass && rep.rows[i].pass;
  }
  return rep;
}

}  // namespace coalsim
