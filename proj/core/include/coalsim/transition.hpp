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
#include <span>
#include <vector>

#include "coalsim/jump_kernel.hpp"

namespace coalsim {

/// P(X_{rate * t} = x) for the walk started at 0.
struct TransitionQuery {
  double t = 0.0;
  std::int64_t x = 0;
  double rate = 1.0;
};

/// (1/pi) int_0^pi cos(x u) exp(-rate t psi(u)) du, clamped to [0, 1].
/// Throws QuadratureError when the error bound exceeds 1e-9.
double transition_probability(const JumpKernel& kernel, const TransitionQuery& q);

/// P(X_t = 0) - P(X_t = x), as a single integral against 1 - cos(x u).
double transition_difference(const JumpKernel& kernel, std::int64_t x, double t, double rate = 1.0);

/// Fixed composite Gauss-Legendre rule on [0, pi] for batches of
/// exp(-s psi(u)) integrals. Panels follow the kernel's psi panels and are
/// refined until max_x times the panel width is at most pi.
class SpectralRule {
 public:
  SpectralRule(const JumpKernel& kernel, double max_x, std::size_t points_per_panel = 24);

  std::span<const double> nodes() const { return nodes_; }
  /// Quadrature weights including the 1/pi prefactor.
  std::span<const double> weights() const { return weights_; }
  std::span<const double> psi() const { return psi_; }

  /// P(X_s = 0).
  double zero_return(double s) const;
  /// P(X_s = 0) - P(X_s = x).
  double difference(std::int64_t x, double s) const;
  /// weights scaled by (1 - cos(x u)).
  std::vector<double> difference_weights(std::int64_t x) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> psi_;
};

}  // namespace coalsim
