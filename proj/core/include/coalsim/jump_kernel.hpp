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
#include <memory>
#include <span>
#include <vector>

#include "coalsim/quadrature.hpp"
#include "coalsim/rng.hpp"
#include "coalsim/svf.hpp"

namespace coalsim {

using wide_int = __int128;
using wide_uint = unsigned __int128;

/// Largest jump magnitude the tail sampler will return.
inline constexpr wide_uint kMaxJumpMagnitude = static_cast<wide_uint>(1) << 120;

namespace detail {
struct PsiCache;
}

/// Symmetric lattice jump law with tail T(k) = P(|J| >= k), T(1) = 1 and
/// T(k) = min(T(k-1), L(k) / k^alpha).
///
/// T is tabulated for k <= table_size() + 1; beyond the table T coincides
/// with L(k) / k^alpha, which is decreasing there, so the tail is known in
/// closed form for every k.
class JumpKernel {
 public:
  JumpKernel(double alpha, SvfSpec svf);

  double alpha() const { return alpha_; }
  const SvfSpec& svf() const { return svf_; }

  std::uint64_t table_size() const { return table_; }
  /// First k from which T(k) = L(k)/k^alpha holds for every larger k.
  std::uint64_t analytic_from() const { return analytic_from_; }

  /// T(k) for k >= 1 (T(0) is reported as 1).
  double tail(wide_uint k) const;
  /// L(x) x^-alpha for real x > 0.
  double tail_formula(double x) const;
  /// P(|J| = k).
  double magnitude_mass(wide_uint k) const;
  /// p(x) = P(J = x).
  double mass(std::int64_t x) const;

  /// 1 - (sum_{k <= X} P(|J| = k) + T(X+1)), summed smallest first.
  double normalization_defect() const;

  wide_uint sample_magnitude(PhiloxStream& rng) const;
  wide_int sample(PhiloxStream& rng) const;

  /// psi(u) = 1 - sum_x p(x) cos(u x), evaluated without truncation.
  double psi(double u) const;
  /// sum_{k >= K} P(|J| = k) (1 - cos(u k)).
  double psi_tail(std::uint64_t K, double u) const;
  double cf(double u) const { return 1.0 - psi(u); }

  /// Piecewise Chebyshev interpolant of psi on [psi_floor(), pi]; a power
  /// law below. Built on first use, thread safe.
  double psi_cached(double u) const;
  /// Panel edges of the cached interpolant, starting at 0 and ending at pi.
  std::span<const double> psi_breaks() const;
  /// Smallest sampled psi on panel i of psi_breaks() (panel 0 is [0, floor]).
  double psi_panel_min(std::size_t panel) const;
  double psi_floor() const;

 private:
  const detail::PsiCache& cache() const;
  std::complex<double> abel_plana_sum(std::uint64_t a, double u) const;

  double alpha_;
  SvfSpec svf_;
  std::uint64_t table_ = 0;
  std::uint64_t analytic_from_ = 0;
  std::vector<double> tail_;       // T(k) for k = 0..table_+1, tail_[0] = 1.
  std::vector<double> magnitude_;  // P(|J| = k) for k = 0..table_.
  double defect_ = 0.0;
  std::vector<std::uint64_t> alias_threshold_;
  std::vector<std::uint32_t> alias_index_;
  std::shared_ptr<detail::PsiCache> psi_cache_;
};

/// Throws std::invalid_argument for alpha outside (0, 1], an invalid svf, or
/// a monotone prefix that outruns the largest table.
JumpKernel build_kernel(double alpha, const SvfSpec& svf);

inline wide_int sample_jump(const JumpKernel& kernel, PhiloxStream& rng) {
  return kernel.sample(rng);
}

inline double lattice_cf(const JumpKernel& kernel, double u) { return kernel.cf(u); }

}  // namespace coalsim
