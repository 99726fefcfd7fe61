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

#include "qtsl/qsim.hpp"

using namespace qtsl;

static void BM_coset_measure(benchmark::State &state) {
    Rng rng(1);
    auto a = f2::sample_subspace(static_cast<std::size_t>(state.range(0)), rng);
    auto s = qsim::prepare_subspace_state(a);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qsim::measure_standard(s, rng));
    }
}
BENCHMARK(BM_coset_measure)->Arg(8)->Arg(38);

static void BM_coset_project(benchmark::State &state) {
    Rng rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    auto a = f2::sample_subspace(n, rng);
    auto b = f2::sample_related(a, rng);
    auto s = qsim::prepare_subspace_state(b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qsim::project_subspace(s, a, rng));
    }
}
BENCHMARK(BM_coset_project)->Arg(8)->Arg(38);

static void BM_dense_hadamard(benchmark::State &state) {
    Rng rng(3);
    auto a = f2::sample_subspace(static_cast<std::size_t>(state.range(0)), rng);
    auto d = qsim::to_dense(qsim::prepare_subspace_state(a));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qsim::dense_hadamard_all(d));
    }
}
BENCHMARK(BM_dense_hadamard)->Arg(4)->Arg(8)->Arg(12);

static void BM_dense_project(benchmark::State &state) {
    Rng rng(4);
    auto a = f2::sample_subspace(static_cast<std::size_t>(state.range(0)), rng);
    auto d = qsim::to_dense(qsim::prepare_subspace_state(f2::sample_related(a, rng)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qsim::dense_project(d, a, rng));
    }
}
BENCHMARK(BM_dense_project)->Arg(4)->Arg(8)->Arg(12);
