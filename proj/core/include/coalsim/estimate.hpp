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

namespace coalsim {

/// Monte Carlo mean with its standard error over n samples.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// Streaming mean/variance (Welford), mergeable with Chan's update.
class Welford {
 public:
  void add(double x);
  void merge(const Welford& other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  Estimate estimate() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Delta method for the product of independent estimates.
Estimate product(const Estimate& a, const Estimate& b);
/// Delta method for the ratio a / b of independent estimates.
Estimate quotient(const Estimate& a, const Estimate& b);
/// a^k for an integer k >= 1.
Estimate power(const Estimate& a, int k);

}  // namespace coalsim
