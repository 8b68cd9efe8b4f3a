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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coalsim/config.hpp"
#include "coalsim/jump_kernel.hpp"
#include "coalsim/report.hpp"
#include "coalsim/scaling.hpp"

namespace coalsim {

struct ExperimentResult {
  std::vector<ComparisonRow> rows;
  /// File name -> CSV text.
  std::map<std::string, std::string> files;
  /// Scalar side information for the summary (torus size, flags, ...).
  std::vector<std::pair<std::string, double>> notes;
  bool truncated = false;
  double wall_seconds = 0.0;

  bool passed() const { return all_pass(rows); }
};

/// Runs the configured experiment in memory.
ExperimentResult execute_experiment(const ExperimentConfig& config);

/// execute_experiment, then writes the CSVs and summary.json into
/// config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result);

std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result);

std::string git_describe();

/// `x,p` rows for |x| <= radius.
std::string kernel_dump_csv(const JumpKernel& kernel, std::int64_t radius = 1000);

/// torus.size if set, else ceil(kappa * B_{t_max}) clipped to [2, 2^31 - 1].
std::uint64_t torus_size_for(const ExperimentConfig& config, const ScalingFunctions& scaling);

/// Shortest round-trip decimal form, shared by every CSV writer.
std::string format_number(double v);

}  // namespace coalsim
