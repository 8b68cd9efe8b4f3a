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

#include "coalsim/llt_checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coalsim/transition.hpp"

namespace coalsim {

double space_scale(const JumpKernel& kernel, double t) {
  const double alpha = kernel.alpha();
  const double g0 = stable_density_at_zero_closed_form(alpha, stable_gamma(alpha));
  return g0 / transition_probability(kernel, {t, 0, 1.0});
}

LltReport llt_sup_error(const JumpKernel& kernel, const StableModel& model, double t,
                        double width, std::size_t points) {
  LltReport rep;
  rep.t = t;
  rep.b_t = model.density_at_zero / transition_probability(kernel, {t, 0, 1.0});
  const auto reach = static_cast<std::int64_t>(std::floor(width * rep.b_t));
  const std::int64_t stride =
      std::max<std::int64_t>(1, reach / std::max<std::int64_t>(1, static_cast<std::int64_t>(points)));
  for (std::int64_t x = 0; x <= reach; x += stride) {
    const double p = transition_probability(kernel, {t, x, 1.0});
    const double err = std::abs(rep.b_t * p - stable_density(model, static_cast<double>(x) / rep.b_t));
    ++rep.points;
    if (err > rep.sup_error) {
      rep.sup_error = err;
      rep.argmax = x;
    }
  }
  return rep;
}

DlltReport dllt_bound_check(const JumpKernel& kernel, double t,
                            const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs) {
  DlltReport rep;
  rep.t = t;
  rep.b_t = space_scale(kernel, t);
  for (const auto& [x, y] : pairs) {
    DlltRow row;
    row.x = x;
    row.y = y;
    if (y != 0) {
      row.difference = std::abs(transition_probability(kernel, {t, x + y, 1.0}) -
                                transition_probability(kernel, {t, x, 1.0}));
      row.ratio = row.difference * rep.b_t * rep.b_t / static_cast<double>(std::abs(y));
    }
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

DtlltReport dtllt_bound_check(const JumpKernel& kernel, double t, double s) {
  if (!(s > 0.0 && s <= t / 10.0)) {
    throw std::invalid_argument("dtllt_bound_check requires 0 < s <= t/10");
  }
  DtlltReport rep;
  rep.t = t;
  rep.s = s;
  const double p0 = transition_probability(kernel, {t, 0, 1.0});
  rep.b_t = stable_density_at_zero_closed_form(kernel.alpha(), stable_gamma(kernel.alpha())) / p0;
  rep.difference = std::abs(p0 - transition_probability(kernel, {t + s, 0, 1.0}));
  rep.ratio = rep.difference * rep.b_t * t / s;
  return rep;
}

}  // namespace coalsim
