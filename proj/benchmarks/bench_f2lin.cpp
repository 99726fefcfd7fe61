// Copyright 2026 The QTSL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qtsl/f2lin.hpp"

using namespace qtsl;

static void BM_sample_subspace(benchmark::State &state) {
    Rng rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(f2::sample_subspace(n, rng));
    }
}
BENCHMARK(BM_sample_subspace)->Arg(8)->Arg(18)->Arg(38)->Arg(128);

static void BM_dual(benchmark::State &state) {
    Rng rng(2);
    auto a = f2::sample_subspace(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(f2::dual(a));
    }
}
BENCHMARK(BM_dual)->Arg(8)->Arg(38)->Arg(128);

static void BM_chi_star(benchmark::State &state) {
    Rng rng(3);
    const auto n = static_cast<std::size_t>(state.range(0));
    auto a = f2::sample_subspace(n, rng);
    auto v = f2::sample_element(a, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(f2::chi_star(a, v, state.range(1) != 0));
    }
}
BENCHMARK(BM_chi_star)->Args({38, 0})->Args({38, 1})->Args({128, 0})->Args({128, 1});

static void BM_gaussian_binomial(benchmark::State &state) {
    const auto m = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(f2::gaussian_binomial(m, m / 2));
    }
}
BENCHMARK(BM_gaussian_binomial)->Arg(16)->Arg(64)->Arg(256);
