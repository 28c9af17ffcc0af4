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

#include <random>

#include "kchain/models.hpp"
#include "kchain/operator_map.hpp"

using namespace kchain;

namespace {

OperatorMap random_operator(int n_sites, int terms, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> site(0, n_sites - 1);
  std::uniform_int_distribution<int> kind(1, 3);
  std::uniform_real_distribution<double> coeff(-1, 1);
  std::vector<OperatorMap::Term> out;
  for (int t = 0; t < terms; ++t) {
    SiteMask x, z;
    for (int w = 0; w < 4; ++w) {
      const int s = site(gen);
      const int p = kind(gen);
      if (p & 1) x.set(s);
      if (p & 2) z.set(s);
    }
    out.push_back({x, z, coeff(gen)});
  }
  return OperatorMap::from_terms(n_sites, false, std::move(out));
}

}  // namespace

static void BM_StringProduct(benchmark::State& state) {
  const auto a = PauliString::from_str("XZIYXZIYXZIYXZIY");
  const auto b = PauliString::from_str("IYXZIYXZIYXZIYXZ");
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiply(a, b));
  }
}
BENCHMARK(BM_StringProduct);

static void BM_MaskRotation(benchmark::State& state) {
  SiteMask m;
  m.set(3);
  m.set(64);
  m.set(90);
  int shift = 0;
  for (auto _ : state) {
    shift = (shift + 7) % 96;
    benchmark::DoNotOptimize(m.rotated(shift, 96));
  }
}
BENCHMARK(BM_MaskRotation);

static void BM_CommutatorPlain(benchmark::State& state) {
  const int terms = static_cast<int>(state.range(0));
  const auto h = build_chaotic(24, false);
  const auto a = random_operator(24, terms, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(commutator(h, a));
  }
  state.SetItemsProcessed(state.iterations() * h.size() * a.size());
}
BENCHMARK(BM_CommutatorPlain)->Arg(256)->Arg(2048)->Arg(16384);

static void BM_CommutatorReduced(benchmark::State& state) {
  const int terms = static_cast<int>(state.range(0));
  const int n = 96;
  const auto h = build_chaotic(n, true);
  // grow a realistic operator until the cap binds
  auto a = build_seed("chaotic_O0", n, true);
  TruncationPolicy pol;
  pol.max_strings = static_cast<std::size_t>(terms);
  while (a.size() < static_cast<std::size_t>(terms)) {
    const auto next = commutator(h, a, pol);
    if (next.size() <= a.size()) break;
    a = next;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(commutator(h, a, pol));
  }
  state.SetItemsProcessed(state.iterations() * a.size());
}
BENCHMARK(BM_CommutatorReduced)->Arg(4096)->Arg(32768);

static void BM_InnerProduct(benchmark::State& state) {
  const auto a = random_operator(24, 20000, 7);
  const auto b = random_operator(24, 20000, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.inner_product(b));
  }
}
BENCHMARK(BM_InnerProduct);

BENCHMARK_MAIN();
