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

#pragma once

#include <cstdint>
#include <vector>

#include "coalsim/jump_kernel.hpp"
#include "coalsim/scaling.hpp"
#include "coalsim/stable_model.hpp"

namespace coalsim {

/// j(t) = sum_x p(x) P(tau_x > t) on a graded grid: fine cells of width
/// step/10 up to about min(1, horizon/100), cells of width `step` after.
struct VolterraGrid {
  double step = 0.0;
  double horizon = 0.0;
  double fine_step = 0.0;
  std::size_t fine_cells = 0;
  std::vector<double> times;
  std::vector<double> j_values;
  /// max |1 - P(X_t = 0) - int_0^t P(X_s = 0) j(t - s) ds| over the
  /// midpoints of the coarse cells.
  double residual_max = 0.0;
  double residual_tolerance = 1e-3;

  bool residual_ok() const { return residual_max <= residual_tolerance; }
  /// Piecewise linear in t; throws std::out_of_range beyond the horizon.
  double j(double t) const;
};

struct VolterraOptions {
  double residual_tolerance = 1e-3;
  std::size_t points_per_panel = 24;
};

/// Solves 1 = P(X_t = 0) + int_0^t P(X_s = 0) j(t - s) ds with j piecewise
/// linear and P(X_s = 0) integrated exactly against it (product trapezoid).
/// Requires 0 < step <= horizon / 100.
VolterraGrid solve_j(const JumpKernel& kernel, double horizon, double step,
                     const VolterraOptions& options = {});

/// P(tau_x > t) = Delta(x, t) + int_0^t Delta(x, s) j(t - s) ds with
/// Delta(x, s) = P(X_s = 0) - P(X_s = x). Requires x != 0 and t within the
/// grid horizon.
double hitting_tail(const JumpKernel& kernel, std::int64_t x, double t, const VolterraGrid& j);

/// a(x) / (g(0) l(t)).
double hitting_tail_theory(const StableModel& model, const ScalingFunctions& scaling,
                           double a_x, double t);
double hitting_tail_theory(const StableModel& model, const ScalingFunctions& scaling,
                           const JumpKernel& kernel, std::int64_t x, double t);

namespace detail {
/// int_0^1 (1 - v) exp(-z v) dv and int_0^1 v exp(-z v) dv.
double cell_weight_a(double z);
double cell_weight_b(double z);
}  // namespace detail

}  // namespace coalsim
