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

#include "coalsim/estimate.hpp"

#include <algorithm>
#include <cmath>

namespace coalsim {

void Welford::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void Welford::merge(const Welford& other) {
  if (other.n_ == 0) {
    return;
  }
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  mean_ = (na * mean_ + nb * other.mean_) / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  n_ += other.n_;
}

double Welford::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

Estimate Welford::estimate() const {
  Estimate e;
  e.mean = mean_;
  e.n = n_;
  e.std_error = n_ < 2 ? 0.0 : std::sqrt(std::max(0.0, variance()) / static_cast<double>(n_));
  return e;
}

Estimate product(const Estimate& a, const Estimate& b) {
  Estimate e;
  e.mean = a.mean * b.mean;
  e.std_error = std::hypot(b.mean * a.std_error, a.mean * b.std_error);
  e.n = std::min(a.n, b.n);
  return e;
}

Estimate quotient(const Estimate& a, const Estimate& b) {
  Estimate e;
  e.mean = a.mean / b.mean;
  e.std_error = std::hypot(a.std_error / b.mean, a.mean * b.std_error / (b.mean * b.mean));
  e.n = std::min(a.n, b.n);
  return e;
}

Estimate power(const Estimate& a, int k) {
  Estimate e;
  e.mean = std::pow(a.mean, k);
  e.std_error = std::abs(k * std::pow(a.mean, k - 1)) * a.std_error;
  e.n = a.n;
  return e;
}

}  // namespace coalsim
