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


#include <benchmark/benchmark.h>

#include "coalsim/jump_kernel.hpp"
#include "coalsim/transition.hpp"

using namespace coalsim;

static void BM_SampleJump(benchmark::State& state) {
  const auto k = build_kernel(static_cast<double>(state.range(0)) / 10.0, LogPowerSvf{0.5});
  PhiloxStream rng(1, stream_id(StreamPurpose::kTest, 0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_jump(k, rng));
  }
}
BENCHMARK(BM_SampleJump)->Arg(5)->Arg(10);

static void BM_Psi(benchmark::State& state) {
  const auto k = build_kernel(0.5, LogPowerSvf{0.5});
  double u = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.psi(u));
    u = u < 3.0 ? u * 1.1 : 1e-6;
  }
}
BENCHMARK(BM_Psi);

static void BM_PsiCached(benchmark::State& state) {
  const auto k = build_kernel(0.5, LogPowerSvf{0.5});
  k.psi_cached(1.0);
  double u = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.psi_cached(u));
    u = u < 3.0 ? u * 1.1 : 1e-6;
  }
}
BENCHMARK(BM_PsiCached);

static void BM_TransitionProbability(benchmark::State& state) {
  const auto k = build_kernel(1.0, ConstantSvf{1.0});
  k.psi_cached(1.0);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(transition_probability(k, {t, 3, 1.0}));
  }
}
BENCHMARK(BM_TransitionProbability)->Arg(1)->Arg(1000);
