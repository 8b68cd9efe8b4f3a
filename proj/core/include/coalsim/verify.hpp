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
#include <functional>
#include <string>
#include <vector>

#include "coalsim/report.hpp"

namespace coalsim {

struct VerifyOptions {
  std::uint64_t seed = 20261015;
  unsigned workers = 1;
  /// Multiplies the tabulated gamma fixture; anything but 1 should fail
  /// criterion 1.
  double gamma_fixture_scale = 1.0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<ComparisonRow> rows;
  /// Free-form one-liner, e.g. the exception text when a check throws.
  std::string detail;
};

CriterionResult verify_stable_constants(const VerifyOptions& options);
CriterionResult verify_potential_identity(const VerifyOptions& options);
CriterionResult verify_volterra_vs_mc(const VerifyOptions& options);
CriterionResult verify_j_asymptotics(const VerifyOptions& options);
CriterionResult verify_hitting_asymptotics(const VerifyOptions& options);
/// Criteria 6, 8 and 9 share one coalescing run.
std::vector<CriterionResult> verify_coalescing(const VerifyOptions& options);
CriterionResult verify_noncollision(const VerifyOptions& options);
CriterionResult verify_determinism(const VerifyOptions& options);

/// All ten criteria in order. A throwing check becomes a failed criterion.
/// `progress` (if set) sees each result as it completes.
std::vector<CriterionResult> verify_suite(
    const VerifyOptions& options,
    const std::function<void(const CriterionResult&)>& progress = {});

std::string verify_json(const std::vector<CriterionResult>& results);

/// "criterion N <name>: PASS|FAIL (...)".
std::string verdict_line(const CriterionResult& result);

}  // namespace coalsim
