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

#include "qtsl/stack.hpp"

using namespace qtsl;

namespace {

stack::TsParams params(unsigned kappa, prim::DsAlgorithm ds) {
    auto p = stack::TsParams::defaults(kappa);
    p.ds = ds;
    p.merkle_height = 12;
    return p;
}

}  // namespace

static void BM_ts_token_gen(benchmark::State &state) {
    Rng rng(1);
    auto kp = stack::ts_keygen(params(static_cast<unsigned>(state.range(0)), prim::DsAlgorithm::ed25519), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stack::ts_token_gen(kp.sk, rng));
    }
}
BENCHMARK(BM_ts_token_gen)->Arg(16)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_ts_sign(benchmark::State &state) {
    Rng rng(2);
    auto kp = stack::ts_keygen(params(static_cast<unsigned>(state.range(0)), prim::DsAlgorithm::ed25519), rng);
    const Bytes doc = to_bytes("benchmark document");
    for (auto _ : state) {
        state.PauseTiming();
        auto token = stack::ts_token_gen(kp.sk, rng);
        state.ResumeTiming();
        benchmark::DoNotOptimize(stack::ts_sign(doc, token, rng));
    }
}
BENCHMARK(BM_ts_sign)->Arg(16)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_ts_verify(benchmark::State &state) {
    Rng rng(3);
    const auto ds = state.range(1) == 0 ? prim::DsAlgorithm::ed25519 : prim::DsAlgorithm::merkle_lamport;
    auto kp = stack::ts_keygen(params(static_cast<unsigned>(state.range(0)), ds), rng);
    const Bytes doc = to_bytes("benchmark document");
    std::optional<stack::TsSignature> sig;
    while (!sig) {
        auto token = stack::ts_token_gen(kp.sk, rng);
        sig = stack::ts_sign(doc, token, rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(stack::ts_verify(kp.pk, doc, *sig));
    }
}
BENCHMARK(BM_ts_verify)->Args({16, 0})->Args({128, 0})->Args({16, 1})->Unit(benchmark::kMicrosecond);

static void BM_ts_verify_token(benchmark::State &state) {
    Rng rng(4);
    auto kp = stack::ts_keygen(params(static_cast<unsigned>(state.range(0)), prim::DsAlgorithm::ed25519), rng);
    auto token = stack::ts_token_gen(kp.sk, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stack::ts_verify_token(kp.pk, token, rng));
    }
}
BENCHMARK(BM_ts_verify_token)->Arg(16)->Arg(128)->Unit(benchmark::kMicrosecond);
