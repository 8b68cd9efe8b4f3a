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


#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "coalsim/rng.hpp"
#include "doctest.h"

using coalsim::PhiloxStream;
using coalsim::StreamPurpose;

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(coalsim::philox4x32({0, 0, 0, 0}, {0, 0}) ==
        A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(coalsim::philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                            {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(coalsim::philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams replay and separate") {
  PhiloxStream a(42, coalsim::stream_id(StreamPurpose::kTest, 3, 1));
  PhiloxStream b(42, coalsim::stream_id(StreamPurpose::kTest, 3, 1));
  PhiloxStream c(42, coalsim::stream_id(StreamPurpose::kTest, 3, 2));
  PhiloxStream d(43, coalsim::stream_id(StreamPurpose::kTest, 3, 1));
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    same_c += x == c.next_u64();
    same_d += x == d.next_u64();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
  CHECK(a.blocks_consumed() == 500);
}

TEST_CASE("copies continue from the same position") {
  PhiloxStream a(1, 2);
  a.next_u64();
  PhiloxStream b = a;
  for (int i = 0; i < 9; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("stream ids do not collide across purposes, replicas and members") {
  std::set<std::uint64_t> ids;
  for (auto p : {StreamPurpose::kDensity, StreamPurpose::kHitting, StreamPurpose::kNonCollision}) {
    for (std::uint64_t r : {0ull, 1ull, 999999ull}) {
      for (std::uint64_t m : {0ull, 1ull, 4ull}) {
        ids.insert(coalsim::stream_id(p, r, m));
      }
    }
  }
  CHECK(ids.size() == 27);
}

TEST_CASE("uniform lies in (0, 1] with mean 1/2 and variance 1/12") {
  PhiloxStream s(7, 0);
  const int n = 400000;
  double sum = 0, sum2 = 0, lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    sum += u;
    sum2 += u * u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi <= 1.0);
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum2 / n - mean * mean - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("exponential has the requested rate") {
  PhiloxStream s(9, 0);
  const int n = 200000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    sum += s.exponential(4.0);
  }
  CHECK(std::abs(sum / n - 0.25) < 4.0 * 0.25 / std::sqrt(n));
}

TEST_CASE("below is uniform on small ranges") {
  PhiloxStream s(11, 0);
  const std::uint64_t k = 7;
  const int n = 700000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    const auto v = s.below(k);
    REQUIRE(v < k);
    ++counts[v];
  }
  double chi2 = 0;
  const double e = static_cast<double>(n) / k;
  for (const int c : counts) {
    chi2 += (c - e) * (c - e) / e;
  }
  // 6 degrees of freedom; 22.46 is the 0.999 quantile.
  CHECK(chi2 < 22.46);
}
