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
#include "coalsim/particle_system.hpp"

using namespace coalsim;

static void BM_StepEvent(benchmark::State& state) {
  const auto k = build_kernel(0.5, ConstantSvf{1.0});
  const auto M = static_cast<std::uint64_t>(state.range(0));
  PhiloxStream rng(2, stream_id(StreamPurpose::kTest, 0));
  auto s = init_full_torus(M);
  for (auto _ : state) {
    if (s.count() < 2) {
      state.PauseTiming();
      s = init_full_torus(M);
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(step_event(s, k, rng));
  }
}
BENCHMARK(BM_StepEvent)->Arg(1 << 12)->Arg(1 << 20);
