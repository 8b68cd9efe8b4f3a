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

#include "coalsim/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coalsim/potential.hpp"
#include "coalsim/transition.hpp"

namespace coalsim {

namespace detail {

double cell_weight_a(double z) {
  if (z < 0.5) {
    // sum_n (-z)^n / (n! (n+1) (n+2))
    double term = 1.0, sum = 0.0;
    for (int n = 0; n < 30; ++n) {
      sum += term / ((n + 1.0) * (n + 2.0));
      term *= -z / (n + 1.0);
    }
    return sum;
  }
  return (z + std::expm1(-z)) / (z * z);
}

double cell_weight_b(double z) {
  if (z < 0.5) {
    double term = 1.0, sum = 0.0;
    for (int n = 0; n < 30; ++n) {
      sum += term / (n + 2.0);
      term *= -z / (n + 1.0);
    }
    return sum;
  }
  return (1.0 - std::exp(-z) * (1.0 + z)) / (z * z);
}

}  // namespace detail

namespace {

constexpr double kFlush = 1e-300;

struct Layout {
  double fine_step = 0.0;
  std::size_t fine_cells = 0;
  std::size_t coarse_cells = 0;
  std::vector<std::size_t> pos;  // node positions in units of fine_step.

  std::size_t width(std::size_t cell) const { return pos[cell + 1] - pos[cell]; }
};

Layout make_layout(double horizon, double step) {
  Layout g;
  const double t0 = std::min(1.0, horizon / 100.0);
  const auto per_step = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(t0 / step)));
  g.fine_step = step / 10.0;
  g.fine_cells = 10 * per_step;
  const double rest = horizon / g.fine_step - static_cast<double>(g.fine_cells);
  g.coarse_cells = rest > 0.0 ? static_cast<std::size_t>(std::ceil(rest / 10.0 - 1e-9)) : 0;
  for (std::size_t i = 0; i <= g.fine_cells; ++i) {
    g.pos.push_back(i);
  }
  for (std::size_t k = 1; k <= g.coarse_cells; ++k) {
    g.pos.push_back(g.fine_cells + 10 * k);
  }
  return g;
}

}  // namespace

double VolterraGrid::j(double t) const {
  if (t < 0.0 || t > times.back() * (1.0 + 1e-12)) {
    throw std::out_of_range("t = " + std::to_string(t) + " outside the Volterra horizon");
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  i = std::min(i, times.size() - 2);
  const double w = std::clamp((t - times[i]) / (times[i + 1] - times[i]), 0.0, 1.0);
  return (1.0 - w) * j_values[i] + w * j_values[i + 1];
}

VolterraGrid solve_j(const JumpKernel& kernel, double horizon, double step,
                     const VolterraOptions& options) {
  if (!(step > 0.0) || !(horizon > 0.0) || step > horizon / 100.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("solve_j requires 0 < step <= horizon/100");
  }
  const Layout g = make_layout(horizon, step);
  const SpectralRule rule(kernel, 0.0, options.points_per_panel);
  const auto w = rule.weights();
  const auto psi = rule.psi();
  const std::size_t nq = w.size();
  const std::size_t D = g.pos.back() + 5;
  const double hf = g.fine_step, hc = 10.0 * hf, hm = 5.0 * hf;

  // Moment tables indexed by the distance (in fine steps) from the target
  // time to the right end of a cell.
  std::vector<double> p0(D + 1, 0.0), fa(D + 1, 0.0), fb(D + 1, 0.0), ca(D + 1, 0.0),
      cb(D + 1, 0.0);
  double half_a = 0.0, half_b = 0.0;
  for (std::size_t i = 0; i < nq; ++i) {
    const double q = std::exp(-hf * psi[i]);
    const double wfa = w[i] * hf * detail::cell_weight_a(hf * psi[i]);
    const double wfb = w[i] * hf * detail::cell_weight_b(hf * psi[i]);
    const double wca = w[i] * hc * detail::cell_weight_a(hc * psi[i]);
    const double wcb = w[i] * hc * detail::cell_weight_b(hc * psi[i]);
    half_a += w[i] * hm * detail::cell_weight_a(hm * psi[i]);
    half_b += w[i] * hm * detail::cell_weight_b(hm * psi[i]);
    double e = 1.0;
    for (std::size_t d = 0; d <= D; ++d) {
      p0[d] += w[i] * e;
      fa[d] += wfa * e;
      fb[d] += wfb * e;
      ca[d] += wca * e;
      cb[d] += wcb * e;
      e *= q;
      if (e < kFlush) {
        break;
      }
    }
  }

  auto moment_a = [&](std::size_t cell, std::size_t d) {
    return cell < g.fine_cells ? fa[d] : ca[d];
  };
  auto moment_b = [&](std::size_t cell, std::size_t d) {
    return cell < g.fine_cells ? fb[d] : cb[d];
  };

  const std::size_t nodes = g.pos.size();
  std::vector<double> jv(nodes, 0.0);
  jv[0] = 1.0;
  for (std::size_t n = 1; n < nodes; ++n) {
    const std::size_t tn = g.pos[n];
    double acc = 1.0 - p0[tn];
    for (std::size_t m = 0; m + 1 < n; ++m) {
      const std::size_t d = tn - g.pos[m + 1];
      acc -= moment_a(m, d) * jv[m + 1] + moment_b(m, d) * jv[m];
    }
    acc -= moment_b(n - 1, 0) * jv[n - 1];
    const double diag = moment_a(n - 1, 0);
    if (!(diag > 1e-300)) {
      throw std::runtime_error("solve_j: diagonal coefficient underflow");
    }
    jv[n] = acc / diag;
  }

  VolterraGrid out;
  out.step = step;
  out.fine_step = hf;
  out.fine_cells = g.fine_cells;
  out.horizon = static_cast<double>(g.pos.back()) * hf;
  out.residual_tolerance = options.residual_tolerance;
  out.times.resize(nodes);
  for (std::size_t n = 0; n < nodes; ++n) {
    out.times[n] = static_cast<double>(g.pos[n]) * hf;
  }
  out.j_values = jv;

  // Residual at coarse-cell midpoints (at most ~1000 of them).
  const std::size_t stride = std::max<std::size_t>(1, g.coarse_cells / 1000);
  for (std::size_t n = g.fine_cells; n + 1 < nodes; n += stride) {
    const std::size_t target = g.pos[n] + 5;
    const double j_mid = 0.5 * (jv[n] + jv[n + 1]);
    double r = 1.0 - p0[target] - half_a * j_mid - half_b * jv[n];
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t d = target - g.pos[m + 1];
      r -= moment_a(m, d) * jv[m + 1] + moment_b(m, d) * jv[m];
    }
    out.residual_max = std::max(out.residual_max, std::abs(r));
  }
  return out;
}

double hitting_tail(const JumpKernel& kernel, std::int64_t x, double t, const VolterraGrid& j) {
  if (x == 0) {
    throw std::invalid_argument("hitting_tail requires x != 0");
  }
  if (t < 0.0 || t > j.horizon * (1.0 + 1e-12)) {
    throw std::out_of_range("t = " + std::to_string(t) + " outside the Volterra horizon");
  }
  if (t == 0.0) {
    return 1.0;
  }
  t = std::min(t, j.horizon);
  const SpectralRule rule(kernel, std::abs(static_cast<double>(x)));
  const auto wx = rule.difference_weights(x);
  const auto psi = rule.psi();
  const auto& ts = j.times;
  const auto& jv = j.j_values;

  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t n = static_cast<std::size_t>(it - ts.begin()) - 1;
  n = std::min(n, ts.size() - 1);
  const double delta = t - ts[n];
  const double j_t = n + 1 < ts.size() ? j.j(t) : jv[n];
  const double hf = j.fine_step, hc = 10.0 * hf;

  double total = 0.0;
  for (std::size_t i = 0; i < wx.size(); ++i) {
    if (wx[i] == 0.0) {
      continue;
    }
    const double p = psi[i];
    double sum = std::exp(-t * p);
    if (delta > 0.0) {
      sum += delta * (detail::cell_weight_a(delta * p) * j_t + detail::cell_weight_b(delta * p) * jv[n]);
    }
    const double fa = hf * detail::cell_weight_a(hf * p), fb = hf * detail::cell_weight_b(hf * p);
    const double ca = hc * detail::cell_weight_a(hc * p), cb = hc * detail::cell_weight_b(hc * p);
    const double qf = std::exp(-hf * p), qc = std::exp(-hc * p);
    double e = std::exp(-delta * p);
    for (std::size_t m = n; m-- > 0;) {
      if (m < j.fine_cells) {
        sum += e * (fa * jv[m + 1] + fb * jv[m]);
        e *= qf;
      } else {
        sum += e * (ca * jv[m + 1] + cb * jv[m]);
        e *= qc;
      }
      if (e < kFlush) {
        break;
      }
    }
    total += wx[i] * sum;
  }
  return std::clamp(total, 0.0, 1.0);
}

double hitting_tail_theory(const StableModel& model, const ScalingFunctions& scaling, double a_x,
                           double t) {
  return a_x / (model.density_at_zero * scaling.l(t));
}

double hitting_tail_theory(const StableModel& model, const ScalingFunctions& scaling,
                           const JumpKernel& kernel, std::int64_t x, double t) {
  return hitting_tail_theory(model, scaling, potential_kernel(kernel, x), t);
}

}  // namespace coalsim
