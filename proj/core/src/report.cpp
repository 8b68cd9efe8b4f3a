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

#include "coalsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace coalsim {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInfo:
      return "info";
  }
  return "info";
}

ComparisonRow make_row(std::string name, double t, const Estimate& mc, double theory,
                       Verdict verdict) {
  ComparisonRow r;
  r.name = std::move(name);
  r.t = t;
  r.mc_mean = mc.mean;
  r.mc_stderr = mc.std_error;
  r.theory_value = theory;
  r.verdict = verdict;
  if (theory > 0.0) {
    r.ratio = mc.mean / theory;
    r.ratio_ci_low = (mc.mean - 1.96 * mc.std_error) / theory;
    r.ratio_ci_high = (mc.mean + 1.96 * mc.std_error) / theory;
  } else {
    r.ratio = r.ratio_ci_low = r.ratio_ci_high = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

Verdict ratio_verdict(const ComparisonRow& row, double low, double high) {
  return row.ratio >= low && row.ratio <= high ? Verdict::kPass : Verdict::kFail;
}

double density_theory(const StableModel& model, const ScalingFunctions& scaling, double t) {
  return model.density_at_zero * scaling.l(2.0 * t) / t;
}

int pair_count(int N) { return N * (N - 1) / 2; }

NonCollisionFit fit_noncollision_constant(std::span<const double> times,
                                          std::span<const Estimate> curve,
                                          const ScalingFunctions& scaling, int N) {
  if (times.size() != curve.size()) {
    throw std::invalid_argument("fit_noncollision_constant: one estimate per checkpoint");
  }
  if (times.size() < 4) {
    throw std::invalid_argument("fit_noncollision_constant needs at least 4 checkpoints");
  }
  NonCollisionFit fit;
  const int v = pair_count(N);
  const std::size_t first = times.size() / 2;
  std::vector<double> x, s, se;
  for (std::size_t k = first; k < times.size(); ++k) {
    const double scale = std::pow(scaling.l(2.0 * times[k]), v);
    x.push_back(std::log10(times[k]));
    s.push_back(curve[k].mean * scale);
    se.push_back(curve[k].std_error * scale);
  }
  if (std::all_of(curve.begin() + static_cast<std::ptrdiff_t>(first), curve.end(),
                  [](const Estimate& e) { return e.mean <= 0.0; })) {
    fit.insufficient_survivors = true;
    return fit;
  }
  const bool equal_weights =
      std::any_of(se.begin(), se.end(), [](double e) { return !(e > 0.0); });
  std::vector<double> w(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    w[k] = equal_weights ? 1.0 : 1.0 / (se[k] * se[k]);
  }
  double sw = 0, swx = 0, sws = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    sw += w[k];
    swx += w[k] * x[k];
    sws += w[k] * s[k];
  }
  fit.c_hat = sws / sw;
  if (!equal_weights) {
    fit.c_stderr = 1.0 / std::sqrt(sw);
  }
  const double xbar = swx / sw;
  double sxx = 0, sxs = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    sxx += w[k] * (x[k] - xbar) * (x[k] - xbar);
    sxs += w[k] * (x[k] - xbar) * s[k];
  }
  const double slope = sxx > 0 ? sxs / sxx : 0.0;
  fit.drift = slope / fit.c_hat;
  if (!equal_weights && sxx > 0) {
    fit.drift_stderr = 1.0 / std::sqrt(sxx) / std::abs(fit.c_hat);
  }

  const double target = times.back() / 10.0;
  std::size_t ref = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs(std::log(times[k] / target)) < std::abs(std::log(times[ref] / target))) {
      ref = k;
    }
  }
  const double s_last = curve.back().mean * std::pow(scaling.l(2.0 * times.back()), v);
  const double s_ref = curve[ref].mean * std::pow(scaling.l(2.0 * times[ref]), v);
  fit.decade_change = s_ref > 0 ? s_last / s_ref - 1.0 : std::numeric_limits<double>::infinity();

  fit.pass = std::abs(fit.drift) < 0.15 || std::abs(fit.drift) <= 3.0 * fit.drift_stderr;
  return fit;
}

std::vector<ComparisonRow> npoint_report(std::span<const double> times,
                                         std::span<const Estimate> density_est,
                                         std::span<const Estimate> noncollision_est,
                                         std::span<const Estimate> npoint_est, int N, double low,
                                         double high) {
  if (density_est.size() != times.size() || noncollision_est.size() != times.size() ||
      npoint_est.size() != times.size()) {
    throw std::invalid_argument("npoint_report: checkpoints are misaligned");
  }
  if (N < 1) {
    throw std::invalid_argument("npoint_report: N must be positive");
  }
  std::vector<ComparisonRow> rows;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Estimate pred = product(power(density_est[k], N), noncollision_est[k]);
    const Estimate ratio = quotient(npoint_est[k], pred);
    ComparisonRow r = make_row("npoint_factorization", times[k], npoint_est[k], pred.mean);
    if (pred.mean > 0.0) {
      r.ratio = ratio.mean;
      r.ratio_ci_low = ratio.mean - 1.96 * ratio.std_error;
      r.ratio_ci_high = ratio.mean + 1.96 * ratio.std_error;
    }
    r.verdict = ratio_verdict(r, low, high);
    rows.push_back(std::move(r));
  }
  return rows;
}

bool all_pass(std::span<const ComparisonRow> rows) {
  return std::none_of(rows.begin(), rows.end(),
                      [](const ComparisonRow& r) { return r.verdict == Verdict::kFail; });
}

}  // namespace coalsim
