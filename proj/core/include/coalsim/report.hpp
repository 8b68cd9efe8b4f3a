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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coalsim/estimate.hpp"
#include "coalsim/scaling.hpp"
#include "coalsim/stable_model.hpp"

namespace coalsim {

enum class Verdict { kPass, kFail, kInfo };

std::string_view verdict_name(Verdict v);

struct ComparisonRow {
  std::string name;
  double t = 0.0;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  double theory_value = 0.0;
  double ratio = 0.0;
  double ratio_ci_low = 0.0;
  double ratio_ci_high = 0.0;
  Verdict verdict = Verdict::kInfo;
};

/// ratio = mc/theory with a 95% normal interval; NaN ratio when theory <= 0.
ComparisonRow make_row(std::string name, double t, const Estimate& mc, double theory,
                       Verdict verdict = Verdict::kInfo);

/// Pass iff the ratio lies in [low, high].
Verdict ratio_verdict(const ComparisonRow& row, double low, double high);

/// g(0) l(2t) / t.
double density_theory(const StableModel& model, const ScalingFunctions& scaling, double t);

struct NonCollisionFit {
  double c_hat = 0.0;
  double c_stderr = 0.0;
  /// Relative change of p l(2t)^v per decade of t, by weighted least squares.
  double drift = 0.0;
  double drift_stderr = 0.0;
  /// S(t_last) / S(t_last / 10) - 1, the checkpoint nearest t_last/10 standing in.
  double decade_change = 0.0;
  bool insufficient_survivors = false;
  bool pass = false;
};

/// N(N-1)/2.
int pair_count(int N);

/// Needs at least 4 checkpoints. Uses the last half of them.
NonCollisionFit fit_noncollision_constant(std::span<const double> times,
                                          std::span<const Estimate> curve,
                                          const ScalingFunctions& scaling, int N);

/// One row per checkpoint: rho_N against rho_1^N p_NC. Sizes must agree.
std::vector<ComparisonRow> npoint_report(std::span<const double> times,
                                         std::span<const Estimate> density_est,
                                         std::span<const Estimate> noncollision_est,
                                         std::span<const Estimate> npoint_est, int N, double low,
                                         double high);

/// True iff no row is a fail.
bool all_pass(std::span<const ComparisonRow> rows);

}  // namespace coalsim
