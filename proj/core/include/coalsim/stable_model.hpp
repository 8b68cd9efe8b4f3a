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

#include "coalsim/svf.hpp"

namespace coalsim {

/// Continuum limit of the walk: the symmetric alpha-stable law with
/// characteristic function exp(-gamma |u|^alpha).
struct StableModel {
  double alpha = 1.0;
  SvfSpec svf = ConstantSvf{1.0};
  double gamma = 0.0;
  double density_at_zero = 0.0;
};

/// gamma = cos(pi alpha / 2) Gamma(1 - alpha), or pi/2 at alpha = 1.
double stable_gamma(double alpha);

/// Gamma(1 + 1/alpha) / (pi gamma^(1/alpha)).
double stable_density_at_zero_closed_form(double alpha, double gamma);

/// Throws std::invalid_argument for alpha outside (0, 1] or an invalid svf.
StableModel build_model(double alpha, SvfSpec svf);

/// g_alpha(z) = (1/pi) int_0^inf cos(z u) exp(-gamma u^alpha) du, computed
/// by adaptive quadrature split at the zeros of cos(z u); absolute error
/// below 1e-10.
double stable_density(const StableModel& model, double z);

/// P(Z > z) for z > gamma^(1/alpha), from the convergent large-z series
/// (closed form at alpha = 1).
double stable_upper_tail(const StableModel& model, double z);

}  // namespace coalsim
