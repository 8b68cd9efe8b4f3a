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

#include <complex>
#include <string>
#include <string_view>
#include <variant>

namespace coalsim {

/// L(x) = c.
struct ConstantSvf {
  double c = 1.0;
};

/// L(x) = (ln(e + x))^a, a < 1.
struct LogPowerSvf {
  double a = 0.0;
};

/// L(x) = exp(-(ln(e + x))^kappa), kappa in (0, 1).
struct ExpLogPowerSvf {
  double kappa = 0.5;
};

/// Slowly varying modulation of the jump tail. The family is closed so that
/// slow variation and analyticity in the right half-plane hold by
/// construction.
using SvfSpec = std::variant<ConstantSvf, LogPowerSvf, ExpLogPowerSvf>;

/// Throws std::invalid_argument naming the offending parameter.
void validate_svf(const SvfSpec& svf);

double svf_eval(const SvfSpec& svf, double x);

/// Analytic continuation to Re z > -e, used by the contour-based lattice
/// characteristic function.
std::complex<double> svf_eval(const SvfSpec& svf, std::complex<double> z);

/// "constant", "logpower" or "explogpower".
std::string_view svf_family(const SvfSpec& svf);
double svf_parameter(const SvfSpec& svf);

/// Builds an SvfSpec from the config spelling. Throws std::invalid_argument.
SvfSpec make_svf(std::string_view family, double parameter);

std::string describe(const SvfSpec& svf);

}  // namespace coalsim
