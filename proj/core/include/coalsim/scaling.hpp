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

#include <functional>
#include <span>
#include <vector>

#include "coalsim/jump_kernel.hpp"
#include "coalsim/stable_model.hpp"

namespace coalsim {

/// B_t = g(0) / P(X_t = 0) and l(t) = int_0^t ds / B_s sampled on a
/// geometric time grid, interpolated linearly in log-log coordinates.
struct ScalingFunctions {
  double density_at_zero = 0.0;
  std::vector<double> time_grid;
  std::vector<double> b_values;
  std::vector<double> l_values;

  double t_min() const { return time_grid.front(); }
  double t_max() const { return time_grid.back(); }
  /// Throw std::out_of_range outside [t_min, t_max].
  double b(double t) const;
  double l(double t) const;
};

using ZeroReturn = std::function<double(double)>;

/// Rejects grid_points < 16 and t_max <= 0.
ScalingFunctions build_scaling(const StableModel& model, const ZeroReturn& zero_return,
                               double t_max, std::size_t grid_points);

/// Uses transition_probability(kernel, {t, 0}) as the zero-return evaluator.
ScalingFunctions build_scaling(const StableModel& model, const JumpKernel& kernel, double t_max,
                               std::size_t grid_points = 320);

/// B_t l(t) / t.
double script_ell(const ScalingFunctions& scaling, double t);

struct ClassBRow {
  double t = 0.0;
  double l = 0.0;
  double ell_pow_k = 0.0;
  bool pass = false;
};

struct ClassBReport {
  double K = 0.0;
  std::vector<ClassBRow> rows;
  /// All rows in the second half of the grid pass.
  bool tail_pass = false;
};

ClassBReport class_b_report(const ScalingFunctions& scaling, double K,
                            std::span<const double> t_grid);

}  // namespace coalsim
