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

#include <gtest/gtest.h>

#include <cmath>

#include "qtsl/ot1.hpp"

using namespace qtsl;
using namespace qtsl::ot1;
using f2::F2Vector;

namespace {

double sigma(double p, double trials) {
    return std::sqrt(p * (1 - p) / trials);
}

}  // namespace

TEST(Ot1, default_dimension) {
    EXPECT_EQ(default_dimension(16), 18u);
    EXPECT_EQ(default_dimension(1), 2 * static_cast<std::size_t>(std::ceil(std::pow(std::log2(3.0), 1.5))));
    for (unsigned k : {8u, 32u, 128u, 256u}) {
        EXPECT_EQ(default_dimension(k) % 2, 0u);
        EXPECT_GE(default_dimension(k), default_dimension(k / 2));
    }
}

TEST(Ot1, keygen_validates_dimension) {
    Rng rng(1);
    EXPECT_THROW(ot1_keygen(16, rng, 5), std::invalid_argument);
    EXPECT_THROW(ot1_keygen(16, rng, 0), std::invalid_argument);
    auto kp = ot1_keygen(16, rng, 8);
    EXPECT_EQ(kp.sk.space.dim(), 4u);
    EXPECT_EQ(kp.pk->key_id(), kp.sk.key_id);
}

TEST(Ot1, honest_signatures_verify) {
    Rng rng(2);
    for (bool alpha : {false, true}) {
        int ok = 0;
        for (int i = 0; i < 200; i++) {
            auto kp = ot1_keygen(16, rng, 10);
            auto token = ot1_token_gen(kp.sk);
            auto sig = ot1_sign(alpha, token, rng);
            if (sig) {
                ok++;
                EXPECT_TRUE(ot1_verify(*kp.pk, *sig));
            }
            EXPECT_EQ(token.lifecycle, Lifecycle::Spent);
        }
        EXPECT_GT(ok, 180);
    }
}

TEST(Ot1, signing_twice_throws) {
    Rng rng(3);
    auto kp = ot1_keygen(16, rng, 6);
    auto token = ot1_token_gen(kp.sk);
    ot1_sign(false, token, rng);
    EXPECT_THROW(ot1_sign(true, token, rng), TokenSpent);
}

TEST(Ot1, verifier_rejects_zero_wrong_length_and_foreign_keys) {
    Rng rng(4);
    auto kp = ot1_keygen(16, rng, 6);
    EXPECT_FALSE(ot1_verify(*kp.pk, false, F2Vector(6)));
    EXPECT_FALSE(ot1_verify(*kp.pk, true, F2Vector(6)));
    EXPECT_FALSE(ot1_verify(*kp.pk, false, F2Vector(8)));
    auto a = f2::sample_element(kp.sk.space, rng);
    while (a.is_zero()) {
        a = f2::sample_element(kp.sk.space, rng);
    }
    EXPECT_TRUE(ot1_verify(*kp.pk, false, a));
    Ot1Signature foreign{false, a, random_key_id(rng)};
    EXPECT_FALSE(ot1_verify(*kp.pk, foreign));
}

TEST(Ot1, correctness_rate) {
    Rng rng(5);
    for (std::size_t n : {4u, 8u}) {
        const int trials = 20000;
        int ok = 0;
        for (int i = 0; i < trials; i++) {
            auto kp = ot1_keygen(16, rng, n);
            auto token = ot1_token_gen(kp.sk);
            const bool alpha = rng.next_bit();
            auto sig = ot1_sign(alpha, token, rng);
            ok += sig && ot1_verify(*kp.pk, *sig) ? 1 : 0;
        }
        const double p = 1 - std::ldexp(1.0, -static_cast<int>(n / 2));
        EXPECT_NEAR(ok / static_cast<double>(trials), p, 4 * sigma(p, trials)) << n;
    }
}

TEST(Ot1, hadamard_measurement_leaves_the_phase_state) {
    Rng rng(6);
    auto kp = ot1_keygen(16, rng, 6);
    auto token = ot1_token_gen(kp.sk);
    auto b = sign_register(true, token.state, rng);
    ASSERT_TRUE(b);
    ASSERT_TRUE(token.state.holds<qsim::PhaseState>());
    EXPECT_EQ(token.state.get<qsim::PhaseState>().v, *b);
    // Measuring again in the same basis repeats the outcome.
    EXPECT_EQ(sign_register(true, token.state, rng), b);
}

TEST(Ot1, oracle_modes_and_query_counts) {
    Rng rng(7);
    auto kp = ot1_keygen(16, rng, 6);
    auto &oracle = *kp.pk;
    EXPECT_EQ(oracle.query_count(), 0u);
    oracle.query(F2Vector(6), false);
    EXPECT_EQ(oracle.query_count(), 1u);
    auto token = ot1_token_gen(kp.sk);
    EXPECT_TRUE(ot1_verify_token(oracle, token, rng));
    EXPECT_EQ(oracle.query_count(), 3u);
    oracle.set_mode(OracleMode::Withheld);
    EXPECT_THROW(oracle.query(F2Vector(6), false), OracleWithheld);
    EXPECT_THROW(ot1_verify_token(oracle, token, rng), OracleWithheld);
    oracle.set_mode(OracleMode::Public);
    EXPECT_EQ(simulation::hidden_subspace(oracle), kp.sk.space);
}

TEST(Ot1, verify_token_is_non_destructive) {
    Rng rng(8);
    auto kp = ot1_keygen(16, rng, 8);
    auto token = ot1_token_gen(kp.sk);
    for (int i = 0; i < 100; i++) {
        ASSERT_TRUE(ot1_verify_token(*kp.pk, token, rng));
    }
    EXPECT_EQ(token.lifecycle, Lifecycle::Fresh);
    EXPECT_TRUE(token.state.holds<qsim::SubspaceState>());
}

TEST(Ot1, verify_token_rejects_foreign_and_spent_states) {
    Rng rng(9);
    auto kp = ot1_keygen(16, rng, 8);
    int foreign_accepted = 0;
    for (int i = 0; i < 200; i++) {
        auto other = ot1_keygen(16, rng, 8);
        auto foreign = ot1_token_gen(other.sk);
        foreign_accepted += ot1_verify_token(*kp.pk, foreign, rng) ? 1 : 0;
    }
    EXPECT_LE(foreign_accepted, 40);

    auto token = ot1_token_gen(kp.sk);
    token.state = qsim::CosetState(qsim::BasisState{F2Vector::unit(8, 0) ^ F2Vector::unit(8, 1)}, 8);
    int accepted = 0;
    for (int i = 0; i < 100; i++) {
        auto t = token;
        t.key_id = kp.sk.key_id;
        accepted += ot1_verify_token(*kp.pk, t, rng) ? 1 : 0;
    }
    EXPECT_LE(accepted, 30);
}

TEST(Ot1, honest_revocation_rate) {
    Rng rng(10);
    const int trials = 20000;
    int ok = 0;
    for (int i = 0; i < trials; i++) {
        auto kp = ot1_keygen(16, rng, 4);
        auto token = ot1_token_gen(kp.sk);
        ok += ot1_revoke(*kp.pk, token, rng) ? 1 : 0;
        EXPECT_EQ(token.lifecycle, Lifecycle::Spent);
    }
    EXPECT_NEAR(ok / static_cast<double>(trials), 0.75, 4 * sigma(0.75, trials));
}
