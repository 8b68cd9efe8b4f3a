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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coalsim {

/// Thrown when an adaptive rule exhausts its interval budget. Carries the
/// error bound that was reached so callers can report it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_error_;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;
};

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 200000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T, class F>
std::pair<T, double> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kKronrodWeights[i];
    if (i % 2 == 1) {
      gauss += sum * kGaussWeights[i / 2];
    }
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, magnitude(T(kronrod - gauss))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over the union of the
/// intervals delimited by `breaks` (sorted, at least two entries). The
/// interval with the largest error estimate is bisected until the summed
/// estimate falls below max(abs_tol, rel_tol * |I|). Does not throw: the
/// result carries a `converged` flag.
template <class T = double, class F>
QuadResult<T> integrate(F&& f, std::span<const double> breaks, const AdaptiveOptions& opt = {}) {
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  QuadResult<T> out;
  if (breaks.size() < 2) {
    return out;
  }
  std::priority_queue<Piece> heap;
  T total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) {
      continue;
    }
    auto [v, e] = detail::kronrod15<T>(f, breaks[i], breaks[i + 1]);
    out.evaluations += 15;
    total += v;
    total_err += e;
    heap.push({breaks[i], breaks[i + 1], v, e});
  }
  std::size_t intervals = heap.size();
  while (!heap.empty()) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
    if (total_err <= tol) {
      break;
    }
    if (intervals >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * std::abs(mid)) {
      // Interval exhausted at machine resolution; freeze its error.
      out.converged = false;
      break;
    }
    heap.pop();
    auto [v1, e1] = detail::kronrod15<T>(f, worst.a, mid);
    auto [v2, e2] = detail::kronrod15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += (v1 + v2) - worst.value;
    total_err += (e1 + e2) - worst.error;
    heap.push({worst.a, mid, v1, e1});
    heap.push({mid, worst.b, v2, e2});
    ++intervals;
  }
  // Re-sum to shed accumulated update drift.
  T resum{};
  double err = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = resum;
  out.error = err;
  return out;
}

template <class T = double, class F>
QuadResult<T> integrate(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  const std::array<double, 2> br{a, b};
  return integrate<T>(std::forward<F>(f), std::span<const double>(br), opt);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(std::size_t n);

/// Piecewise Chebyshev interpolant on a fixed set of panels. Each panel holds
/// the Chebyshev coefficients of the function sampled at first-kind points.
class ChebyshevPanels {
 public:
  ChebyshevPanels() = default;

  template <class F>
  ChebyshevPanels(std::vector<double> edges, std::size_t degree, F&& f) : edges_(std::move(edges)) {
    build(degree, [&](double x) { return f(x); });
  }

  double operator()(std::size_t panel, double x) const;
  std::size_t panels() const { return edges_.empty() ? 0 : edges_.size() - 1; }
  const std::vector<double>& edges() const { return edges_; }
  double panel_min(std::size_t panel) const { return minima_[panel]; }

 private:
  template <class F>
  void build(std::size_t degree, F&& f) {
    degree_ = degree;
    const std::size_t np = panels();
    coeffs_.assign(np * degree_, 0.0);
    minima_.assign(np, 0.0);
    std::vector<double> samples(degree_);
    for (std::size_t p = 0; p < np; ++p) {
      const double a = edges_[p], b = edges_[p + 1];
      double lo = INFINITY;
      for (std::size_t k = 0; k < degree_; ++k) {
        const double theta = M_PI * (static_cast<double>(k) + 0.5) / static_cast<double>(degree_);
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
        samples[k] = f(x);
        lo = std::min(lo, samples[k]);
      }
      minima_[p] = lo;
      fit(p, samples);
    }
  }
  void fit(std::size_t panel, const std::vector<double>& samples);

  std::vector<double> edges_;
  std::size_t degree_ = 0;
  std::vector<double> coeffs_;
  std::vector<double> minima_;
};

}  // namespace coalsim
