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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coalsim/svf.hpp"

namespace coalsim {

/// Invalid or unknown configuration entry; `key()` names the field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class ExperimentKind { kDensity, kNpoint, kNoncollision, kHitting, kNumerics, kIndependence };

std::string_view experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view name);

struct VerdictThresholds {
  double density_low = 0.75;
  double density_high = 1.25;
  double sandwich_low = 0.1;
  double sandwich_high = 10.0;
  double hitting_low = 0.7;
  double hitting_high = 1.3;
  double npoint_low = 0.5;
  double npoint_high = 2.0;
  double plateau_drift = 0.3;
  double sigma = 3.0;
  double allowance = 1e-3;
};

struct ExperimentConfig {
  double alpha = 0.5;
  std::string svf_family = "constant";
  double svf_param = 1.0;
  ExperimentKind experiment = ExperimentKind::kDensity;
  double torus_kappa = 100.0;
  /// 0 means "size from torus_kappa".
  std::uint64_t torus_size = 0;
  double t_min = 10.0;
  double t_max = 100.0;
  double ratio = 3.1622776601683795;
  std::uint64_t replicas = 20;
  std::uint64_t samples_per_replica = 1;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string output_dir = "out";
  std::vector<std::int64_t> walks_start{0, 1};
  std::vector<std::vector<std::int64_t>> npoint_offsets{{0, 1}, {0, 10}, {0, 100}};
  std::vector<std::int64_t> hitting_sites{1, 5};
  /// 0 means horizon / 10^4.
  double volterra_step = 0.0;
  double independence_bucket_width = 1.0;
  VerdictThresholds verdict;

  SvfSpec svf() const { return make_svf(svf_family, svf_param); }
  /// Geometric grid t_min * ratio^k, with t_max appended if not hit.
  std::vector<double> checkpoints() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
/// keys, malformed values and violated invariants throw ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& config);

/// Flat key -> value echo in the file's own spelling.
std::map<std::string, std::string> config_echo(const ExperimentConfig& config);

std::vector<std::int64_t> parse_int_list(std::string_view text, std::string_view key);
std::string format_int_list(const std::vector<std::int64_t>& values);

}  // namespace coalsim
