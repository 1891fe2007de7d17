/* Copyright 2026 The rvos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Serial reference kernels against their OpenMP counterparts.
//
//   kernels_benchmark --benchmark_filter=DilateDisk

#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "rvos/kernels.h"

namespace {

namespace k = rvos::kernels;

std::vector<uint8_t> RandomPlane(int64_t n, double p, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution on(p);
  std::vector<uint8_t> v(n);
  for (auto& b : v) b = on(rng);
  return v;
}

// Square side from the benchmark argument.
int64_t Side(const benchmark::State& state) { return state.range(0); }

template <int64_t (*Fn)(k::Plane)>
void BM_Count(benchmark::State& state) {
  const auto a = RandomPlane(Side(state) * Side(state), 0.3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a));
  state.SetItemsProcessed(state.iterations() * a.size());
}

template <int64_t (*Fn)(k::Plane, k::Plane)>
void BM_CountAnd(benchmark::State& state) {
  const auto a = RandomPlane(Side(state) * Side(state), 0.3, 1);
  const auto b = RandomPlane(Side(state) * Side(state), 0.3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b));
  state.SetItemsProcessed(state.iterations() * a.size());
}

template <void (*Fn)(std::span<uint32_t>, k::Plane)>
void BM_AddVotes(benchmark::State& state) {
  const auto m = RandomPlane(Side(state) * Side(state), 0.3, 1);
  std::vector<uint32_t> counts(m.size());
  for (auto _ : state) {
    Fn(counts, m);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * m.size());
}

template <void (*Fn)(std::span<const uint32_t>, uint32_t, k::MutablePlane)>
void BM_ThresholdVotes(benchmark::State& state) {
  const int64_t n = Side(state) * Side(state);
  std::vector<uint32_t> counts(n);
  std::mt19937_64 rng(3);
  for (auto& c : counts) c = rng() % 6;
  std::vector<uint8_t> out(n);
  for (auto _ : state) {
    Fn(counts, 3, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n);
}

template <void (*Fn)(int, int, k::Plane, k::MutablePlane)>
void BM_Boundary(benchmark::State& state) {
  const int s = static_cast<int>(Side(state));
  const auto in = RandomPlane(int64_t{s} * s, 0.5, 1);
  std::vector<uint8_t> out(in.size());
  for (auto _ : state) {
    Fn(s, s, in, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * in.size());
}

template <void (*Fn)(int, int, k::Plane, int, k::MutablePlane)>
void BM_DilateDisk(benchmark::State& state) {
  const int s = static_cast<int>(Side(state));
  const int radius = static_cast<int>(state.range(1));
  // Sparse input, like a boundary map.
  const auto in = RandomPlane(int64_t{s} * s, 0.02, 1);
  std::vector<uint8_t> out(in.size());
  for (auto _ : state) {
    Fn(s, s, in, radius, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * in.size());
}

#define RVOS_SIZES ->Arg(64)->Arg(256)->Arg(1024)

BENCHMARK(BM_Count<k::serial::Count>) RVOS_SIZES;
BENCHMARK(BM_Count<k::omp::Count>) RVOS_SIZES;
BENCHMARK(BM_CountAnd<k::serial::CountAnd>) RVOS_SIZES;
BENCHMARK(BM_CountAnd<k::omp::CountAnd>) RVOS_SIZES;
BENCHMARK(BM_AddVotes<k::serial::AddVotes>) RVOS_SIZES;
BENCHMARK(BM_AddVotes<k::omp::AddVotes>) RVOS_SIZES;
BENCHMARK(BM_ThresholdVotes<k::serial::ThresholdVotes>) RVOS_SIZES;
BENCHMARK(BM_ThresholdVotes<k::omp::ThresholdVotes>) RVOS_SIZES;
BENCHMARK(BM_Boundary<k::serial::Boundary>) RVOS_SIZES;
BENCHMARK(BM_Boundary<k::omp::Boundary>) RVOS_SIZES;
BENCHMARK(BM_DilateDisk<k::serial::DilateDisk>)
    ->Args({256, 2})->Args({256, 8})->Args({1024, 8});
BENCHMARK(BM_DilateDisk<k::omp::DilateDisk>)
    ->Args({256, 2})->Args({256, 8})->Args({1024, 8});

#undef RVOS_SIZES

}  // namespace

BENCHMARK_MAIN();
