// Copyright 2026 The kchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "kchain/ideal.hpp"
#include "kchain/lanczos.hpp"
#include "kchain/models.hpp"
#include "kchain/open_chain.hpp"

using namespace kchain;

static void BM_LanczosChaotic(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const int n = 2 * depth + 4;
  const auto h = build_chaotic(n, true);
  const auto o0 = build_seed("chaotic_O0", n, true);
  LanczosOptions opt;
  opt.depth = depth;
  opt.policy.coeff_threshold = 1e-8;
  opt.policy.max_strings = std::size_t{1} << 14;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_lanczos(h, o0, RingGeometry{n, true}, opt));
  }
}
BENCHMARK(BM_LanczosChaotic)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_SpectrumOpen(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const auto lv = build_liouvillian(linear_coefficients(l + 1), l,
                                    ChainKind::open);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum(lv));
  }
}
BENCHMARK(BM_SpectrumOpen)->Arg(64)->Arg(256)->Arg(512)
    ->Unit(benchmark::kMillisecond);

static void BM_EvolveOpen(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const auto lv = build_liouvillian(linear_coefficients(l + 1), l,
                                    ChainKind::open);
  std::vector<double> times{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto phi0 = delta_state(l + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(lv, phi0, times));
  }
}
BENCHMARK(BM_EvolveOpen)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
