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

#include "coalsim/jump_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace coalsim {

namespace detail {

struct PsiCache {
  std::once_flag once;
  ChebyshevPanels panels;
  std::vector<double> breaks;  // 0 followed by the panel edges.
  double floor = 0.0;
  double psi_at_floor = 0.0;
};

}  // namespace detail

namespace {

constexpr std::uint64_t kMinTable = std::uint64_t{1} << 16;
constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 24;
constexpr std::uint64_t kMinAnalytic = 32;
constexpr int kFloorExponent = 67;
constexpr std::size_t kChebDegree = 24;

// ln f(k+1) - ln f(k) for f(x) = L(x) x^-alpha, without cancellation.
double log_step(const SvfSpec& svf, double alpha, double k) {
  const double lk = std::log(M_E + k);
  const double rel = std::log1p(1.0 / (M_E + k)) / lk;  // ln(ln(e+k+1)/ln(e+k))
  double dlog_l = 0.0;
  if (const auto* s = std::get_if<LogPowerSvf>(&svf)) {
    dlog_l = s->a * std::log1p(rel);
  } else if (const auto* s = std::get_if<ExpLogPowerSvf>(&svf)) {
    dlog_l = -std::pow(lk, s->kappa) * std::expm1(s->kappa * std::log1p(rel));
  }
  return dlog_l - alpha * std::log1p(1.0 / k);
}

// Point beyond which L(x) x^-alpha is strictly decreasing.
double decreasing_from(const SvfSpec& svf, double alpha) {
  if (const auto* s = std::get_if<LogPowerSvf>(&svf); s != nullptr && s->a > 0.0) {
    return std::exp(s->a / alpha);
  }
  return 1.0;
}

}  // namespace

JumpKernel::JumpKernel(double alpha, SvfSpec svf) : alpha_(alpha), svf_(std::move(svf)) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  validate_svf(svf_);

  const double need = decreasing_from(svf_, alpha_);
  if (need > static_cast<double>(kMaxTable)) {
    throw std::invalid_argument("svf parameter too large for alpha: tail is not monotone within " +
                                std::to_string(kMaxTable) + " sites");
  }
  std::uint64_t table = kMinTable;
  while (static_cast<double>(table) < need) {
    table *= 2;
  }

  tail_.assign(1, 1.0);
  std::vector<char> on_formula{0};
  for (;;) {
    for (std::uint64_t k = tail_.size(); k <= table + 1; ++k) {
      const double fk = tail_formula(static_cast<double>(k));
      if (k == 1) {
        tail_.push_back(1.0);
        on_formula.push_back(fk == 1.0);
      } else if (fk <= tail_.back()) {
        tail_.push_back(fk);
        on_formula.push_back(1);
      } else {
        tail_.push_back(tail_.back());
        on_formula.push_back(0);
      }
    }
    if (on_formula[table + 1]) {
      break;
    }
    if (table >= kMaxTable) {
      throw std::invalid_argument("monotone prefix of the jump tail exceeds " +
                                  std::to_string(kMaxTable) + " sites");
    }
    table *= 2;
  }
  table_ = table;

  std::uint64_t last_clipped = 0;
  for (std::uint64_t k = 1; k <= table_ + 1; ++k) {
    if (!on_formula[k]) {
      last_clipped = k;
    }
  }
  analytic_from_ = std::max(kMinAnalytic, last_clipped + 1);

  magnitude_.assign(table_ + 1, 0.0);
  for (std::uint64_t k = 1; k <= table_; ++k) {
    if (on_formula[k] && on_formula[k + 1]) {
      magnitude_[k] = -tail_[k] * std::expm1(log_step(svf_, alpha_, static_cast<double>(k)));
    } else {
      magnitude_[k] = tail_[k] - tail_[k + 1];
    }
  }

  long double total = tail_[table_ + 1];
  for (std::uint64_t k = table_; k >= 1; --k) {
    total += magnitude_[k];
  }
  defect_ = static_cast<double>(1.0L - total);

  // Vose alias table over magnitudes 1..table plus one "tail" outcome.
  const std::size_t n = table_ + 1;
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < table_; ++i) {
    scaled[i] = magnitude_[i + 1];
  }
  scaled[table_] = tail_[table_ + 1];
  const double norm = static_cast<double>(total);
  for (auto& s : scaled) {
    s *= static_cast<double>(n) / norm;
  }
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = n; i-- > 0;) {
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<double> prob(n, 1.0);
  alias_index_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    alias_index_[i] = static_cast<std::uint32_t>(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob[s] = scaled[s];
    alias_index_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  alias_threshold_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::clamp(prob[i], 0.0, 1.0);
    alias_threshold_[i] = p >= 1.0 ? UINT64_MAX : static_cast<std::uint64_t>(std::ldexp(p, 64));
  }

  psi_cache_ = std::make_shared<detail::PsiCache>();
}

double JumpKernel::tail_formula(double x) const {
  return svf_eval(svf_, x) * std::pow(x, -alpha_);
}

double JumpKernel::tail(wide_uint k) const {
  if (k <= table_ + 1) {
    return tail_[static_cast<std::size_t>(k)];
  }
  return tail_formula(static_cast<double>(k));
}

double JumpKernel::magnitude_mass(wide_uint k) const {
  if (k == 0) {
    return 0.0;
  }
  if (k <= table_) {
    return magnitude_[static_cast<std::size_t>(k)];
  }
  const double kd = static_cast<double>(k);
  return -tail_formula(kd) * std::expm1(log_step(svf_, alpha_, kd));
}

double JumpKernel::mass(std::int64_t x) const {
  if (x == 0) {
    return 0.0;
  }
  const auto k = static_cast<wide_uint>(x < 0 ? -static_cast<wide_int>(x) : x);
  return 0.5 * magnitude_mass(k);
}

double JumpKernel::normalization_defect() const { return defect_; }

wide_uint JumpKernel::sample_magnitude(PhiloxStream& rng) const {
  const std::uint64_t r = rng.next_u64();
  const wide_uint prod = static_cast<wide_uint>(r) * (table_ + 1);
  auto idx = static_cast<std::size_t>(prod >> 64);
  const auto low = static_cast<std::uint64_t>(prod);
  if (!(low < alias_threshold_[idx] || alias_threshold_[idx] == UINT64_MAX)) {
    idx = alias_index_[idx];
  }
  if (idx < table_) {
    return idx + 1;
  }
  // Tail outcome: invert T exactly on [table + 1, infinity).
  const double v = static_cast<double>((rng.next_u64() >> 11) + 1) * 0x1.0p-53;
  const double target = tail_[table_ + 1] * v;
  auto f = [this](wide_uint k) { return tail_formula(static_cast<double>(k)); };
  wide_uint lo = table_ + 1;
  wide_uint hi = 2 * lo;
  while (f(hi) >= target) {
    lo = hi;
    if (hi >= kMaxJumpMagnitude) {
      return kMaxJumpMagnitude;
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const wide_uint mid = lo + (hi - lo) / 2;
    if (f(mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

wide_int JumpKernel::sample(PhiloxStream& rng) const {
  const auto k = static_cast<wide_int>(sample_magnitude(rng));
  return (rng.next_u64() & 1u) ? k : -k;
}

std::complex<double> JumpKernel::abel_plana_sum(std::uint64_t a, double u) const {
  using C = std::complex<double>;
  const double ad = static_cast<double>(a);
  const double alpha = alpha_;
  const SvfSpec& svf = svf_;
  auto f = [&](C z) { return svf_eval(svf, z) * std::exp(-alpha * std::log(z)); };
  const double fa = tail_formula(ad);
  const C phase = std::polar(1.0, u * ad);

  AdaptiveOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-16 * fa;
  opt.max_intervals = 20000;

  // int_a^inf f(x) e^{iux} dx rotated onto the vertical line Re z = a.
  std::vector<double> br{0.0};
  const double ymax = 45.0 / u;
  for (double y = 0.25 * std::min(ad, 1.0 / u); y < ymax; y *= 2.0) {
    br.push_back(y);
  }
  br.push_back(ymax);
  const auto vertical = integrate<C>([&](double y) { return f(C(ad, y)) * std::exp(-u * y); },
                                     std::span<const double>(br), opt);

  // Abel-Plana correction term.
  std::vector<double> br2{0.0};
  const double ymax2 = 45.0 / (2.0 * M_PI - u);
  for (double y = 0.5; y < ymax2; y *= 2.0) {
    br2.push_back(y);
  }
  br2.push_back(ymax2);
  const auto correction = integrate<C>(
      [&](double y) {
        const C up = f(C(ad, y)) * std::exp(-u * y);
        const C down = f(C(ad, -y)) * std::exp(u * y);
        return (up - down) / std::expm1(2.0 * M_PI * y);
      },
      std::span<const double>(br2), opt);

  return 0.5 * fa * phase + C(0.0, 1.0) * phase * (vertical.value + correction.value);
}

double JumpKernel::psi_tail(std::uint64_t K, double u) const {
  if (u == 0.0) {
    return 0.0;
  }
  K = std::max<std::uint64_t>(K, 1);
  const double half = std::sin(0.5 * u * static_cast<double>(K));
  const double head = tail(K) * 2.0 * half * half;
  const std::uint64_t a = std::max<std::uint64_t>(K + 1, analytic_from_);
  std::complex<double> sum{0.0, 0.0};
  for (std::uint64_t k = a - 1; k >= K + 1; --k) {
    sum += tail(k) * std::polar(1.0, u * static_cast<double>(k));
  }
  sum += abel_plana_sum(a, u);
  const double s = std::sin(0.5 * u);
  return head + 2.0 * s * std::imag(std::polar(1.0, -0.5 * u) * sum);
}

double JumpKernel::psi(double u) const { return psi_tail(1, u); }

const detail::PsiCache& JumpKernel::cache() const {
  detail::PsiCache& c = *psi_cache_;
  std::call_once(c.once, [&] {
    c.floor = std::ldexp(M_PI, -kFloorExponent);
    std::vector<double> dyadic;
    for (int j = kFloorExponent; j >= 0; --j) {
      dyadic.push_back(std::ldexp(M_PI, -j));
    }
    const double width_cap =
        std::max(M_PI / 512.0, std::min(M_PI / 8.0, 4.0 / static_cast<double>(analytic_from_)));
    std::vector<double> edges{dyadic.front()};
    for (std::size_t i = 1; i < dyadic.size(); ++i) {
      const double lo = dyadic[i - 1], hi = dyadic[i];
      const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / width_cap)));
      for (int p = 1; p < pieces; ++p) {
        edges.push_back(lo + (hi - lo) * p / pieces);
      }
      edges.push_back(hi);
    }
    c.panels = ChebyshevPanels(edges, kChebDegree, [this](double u) { return psi(u); });
    c.psi_at_floor = psi(c.floor);
    c.breaks.assign(1, 0.0);
    c.breaks.insert(c.breaks.end(), edges.begin(), edges.end());
  });
  return c;
}

double JumpKernel::psi_cached(double u) const {
  const auto& c = cache();
  if (u <= 0.0) {
    return 0.0;
  }
  if (u < c.floor) {
    return c.psi_at_floor * std::pow(u / c.floor, alpha_);
  }
  const auto& edges = c.panels.edges();
  auto it = std::upper_bound(edges.begin(), edges.end(), u);
  std::size_t panel = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
  panel = std::min(panel, c.panels.panels() - 1);
  return c.panels(panel, u);
}

std::span<const double> JumpKernel::psi_breaks() const {
  const auto& c = cache();
  return {c.breaks.data(), c.breaks.size()};
}

double JumpKernel::psi_panel_min(std::size_t panel) const {
  const auto& c = cache();
  return panel == 0 ? 0.0 : c.panels.panel_min(panel - 1);
}

double JumpKernel::psi_floor() const { return cache().floor; }

JumpKernel build_kernel(double alpha, const SvfSpec& svf) { return JumpKernel(alpha, svf); }

}  // namespace coalsim
