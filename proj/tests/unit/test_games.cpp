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

#include "json.hpp"

#include "convert.hpp"
#include "oracle.hpp"
#include "qtsl/games.hpp"

using namespace qtsl;
using namespace qtsl::games;

namespace {

void expect_rate(const GameReport &rep, double p, double sigmas = 4.0) {
    EXPECT_NEAR(rep.rate, p, sigmas * binomial_sigma(p, rep.trials) + 1e-12) << rep.to_json_line();
}

// Probability that measure-then-guess restores a state passing |A><A|
// at n = 4, conditioned on nothing, by enumeration.
double consistent_guess_oracle() {
    const auto subs = oracle::all_subspaces(4, 2);
    double total = 0.0;
    for (const auto &a : subs) {
        for (auto v : a) {
            if (v == 0) {
                continue;
            }
            std::vector<const oracle::Set *> containing;
            for (const auto &b : subs) {
                if (b.count(v) != 0) {
                    containing.push_back(&b);
                }
            }
            for (const auto *b : containing) {
                const double overlap = static_cast<double>(oracle::intersect(a, *b).size());
                total += overlap * overlap / 16.0 / containing.size();
            }
        }
    }
    return total / (subs.size() * 4.0);
}

}  // namespace

TEST(Stats, wilson_interval_known_values) {
    auto half = wilson_interval(5, 10);
    EXPECT_NEAR(half.lo, 0.236593, 1e-5);
    EXPECT_NEAR(half.hi, 0.763407, 1e-5);
    auto none = wilson_interval(0, 10);
    EXPECT_DOUBLE_EQ(none.lo, 0.0);
    EXPECT_NEAR(none.hi, 0.277533, 1e-5);
    auto all = wilson_interval(10, 10);
    EXPECT_NEAR(all.lo, 0.722467, 1e-5);
    EXPECT_NEAR(all.hi, 1.0, 1e-12);
}

TEST(Stats, binomial_sigma) {
    EXPECT_DOUBLE_EQ(binomial_sigma(0.5, 100), 0.05);
    EXPECT_DOUBLE_EQ(binomial_sigma(0.0, 100), 0.0);
}

TEST(Stats, log2_linear_fit_recovers_slope) {
    std::vector<double> x{4, 6, 8, 10}, y;
    for (double v : x) {
        y.push_back(3.0 * std::pow(2.0, -0.5 * v));
    }
    auto fit = log2_linear_fit(x, y);
    EXPECT_NEAR(fit.slope, -0.5, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log2(3.0), 1e-12);
    EXPECT_THROW(log2_linear_fit({1}, {1}), std::invalid_argument);
    EXPECT_THROW(log2_linear_fit({1, 2}, {1, 0}), std::invalid_argument);
}

TEST(Report, json_shape) {
    auto scheme = make_ot1_scheme(4);
    auto strategy = honest_strategy();
    auto rep = game_unforgeability(*scheme, *strategy, 1, 50, 1);
    auto j = nlohmann::json::parse(rep.to_json_line());
    for (const char *key : {"game", "scheme", "strategy", "params", "successes", "trials", "rate", "wilson95",
                            "analytic", "extras"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["trials"], 50);
    EXPECT_EQ(j["wilson95"].size(), 2u);
}

TEST(Games, honest_strategy_never_wins) {
    for (const char *layer : {"ot1", "otr", "ot", "priv-ot1"}) {
        auto scheme = make_scheme(layer, 8, 4, 16);
        auto honest = honest_strategy();
        EXPECT_EQ(game_unforgeability(*scheme, *honest, 1, 100, 2).successes, 0u) << layer;
        EXPECT_EQ(game_super_security(*scheme, *honest, 1, 100, 2).successes, 0u) << layer;
        EXPECT_EQ(game_everlasting(*scheme, *honest, 1, 100, 2).successes, 0u) << layer;
    }
}

TEST(Games, capability_violator_always_caught) {
    auto scheme = make_ot1_scheme(4);
    auto violator = capability_violator();
    auto rep = game_everlasting(*scheme, *violator, 1, 200, 3);
    EXPECT_EQ(rep.successes, 0u);
    EXPECT_EQ(rep.extras.at("violations"), 200.0);
}

TEST(Games, tm_has_no_public_oracle) {
    auto scheme = make_scheme("tm", 8, 4, 16);
    EXPECT_THROW(scheme->query(0, f2::F2Vector(8), false), CapabilityViolation);
}

TEST(Games, reports_are_reproducible) {
    auto a = make_ot1_scheme(4);
    auto b = make_ot1_scheme(4);
    auto s = naive_double_sign();
    auto r1 = game_unforgeability(*a, *s, 1, 500, 77);
    auto r2 = game_unforgeability(*b, *s, 1, 500, 77);
    EXPECT_EQ(r1.to_json_line(), r2.to_json_line());
    auto r3 = game_unforgeability(*b, *s, 1, 500, 78);
    EXPECT_NE(r1.to_json_line(), r3.to_json_line());
}

TEST(Games, naive_double_sign_matches_analytic) {
    auto scheme = make_ot1_scheme(4);
    auto s = naive_double_sign();
    auto rep = game_unforgeability(*scheme, *s, 1, 20000, 5);
    ASSERT_TRUE(rep.analytic);
    EXPECT_NEAR(*rep.analytic, 9.0 / 64.0, 1e-12);
    expect_rate(rep, 9.0 / 64.0);
    EXPECT_NEAR(rep.extras.at("analytic_conditional"), 3.0 / 16.0, 1e-12);
}

TEST(Games, consistent_guess_matches_enumeration) {
    const double p = consistent_guess_oracle();
    EXPECT_NEAR(p, 15.0 / 56.0, 1e-12);
    auto scheme = make_ot1_scheme(4);
    auto s = consistent_subspace_guess();
    expect_rate(game_everlasting(*scheme, *s, 1, 20000, 6), p);
}

TEST(Games, measure_and_guess_everlasting) {
    auto scheme = make_ot1_scheme(4);
    auto s = measure_and_guess();
    expect_rate(game_everlasting(*scheme, *s, 1, 20000, 7), 3.0 / 16.0);
}

TEST(Games, revoke_twice_rate) {
    auto scheme = make_ot1_scheme(4);
    auto s = revoke_twice();
    const double q = 3.0 / 16.0;
    expect_rate(game_revocability(*scheme, *s, 1, 0, 20000, 8), 0.75 * (1 + q) / 2);
}

TEST(Games, measure_and_rebuild_money) {
    auto scheme = make_ot1_scheme(4);
    auto s = measure_and_rebuild();
    expect_rate(game_money(*scheme, *s, 1, 20000, 9), 1.0 / 16.0);
}

TEST(Games, testability_honest_and_prepared) {
    auto scheme = make_ot1_scheme(4);
    auto honest = game_testability(*scheme, 20, 2000, 10);
    EXPECT_EQ(honest.extras.at("all_accepted"), 2000.0);
    expect_rate(honest, 0.75);

    // A basis state inside A passes |A><A| with probability 1/|A| and
    // then collapses onto |A>, after which every check passes.
    auto prepare = [](GameScheme &s, std::any &token, Rng &rng) {
        for (auto *reg : s.registers(token)) {
            const auto &space = reg->state.get<qsim::SubspaceState>().space;
            auto v = f2::sample_element(space, rng);
            reg->state = qsim::CosetState(qsim::BasisState{v}, space.ambient_dim());
        }
    };
    auto prepared = game_testability(*scheme, 20, 20000, 11, prepare);
    const double first = prepared.extras.at("first_accepted") / 20000.0;
    EXPECT_NEAR(first, 0.25, 4 * binomial_sigma(0.25, 20000));
    EXPECT_EQ(prepared.extras.at("first_accepted"), prepared.extras.at("all_accepted"));
}

TEST(Games, unpredictability) {
    // Two honest one-bit signatures under one key coincide with
    // probability 1/(2^{n/2}-1) once both succeed.
    auto small = make_ot1_scheme(8);
    expect_rate(game_unpredictability(*small, 5000, 12), 1.0 / 15.0);
    auto large = make_ot1_scheme(40);
    EXPECT_EQ(game_unpredictability(*large, 500, 12).successes, 0u);
    stack::TsParams p = stack::TsParams::defaults(16);
    p.n = 16;
    p.hash_bits = 8;
    EXPECT_EQ(game_mds_unpredictability(p, false, 50, 13).successes, 0u);
    auto memo = game_mds_unpredictability(p, true, 50, 13);
    EXPECT_EQ(memo.successes, memo.trials);
    EXPECT_GT(memo.trials, 0u);
}

TEST(Games, make_strategy_rejects_unknown_names) {
    EXPECT_THROW(make_strategy("nope"), std::invalid_argument);
    EXPECT_EQ(make_strategy("naive-double-sign")->name(), "naive-double-sign");
    EXPECT_THROW(make_scheme("nope", 4, 1, 16), std::invalid_argument);
}

TEST(Experiments, query_count_budget_zero) {
    auto rep = query_count_experiment(8, QueryStrategy::RandomQuery, 0, 20000, 14);
    ASSERT_TRUE(rep.analytic);
    expect_rate(rep, *rep.analytic);
    auto exhaustive = query_count_experiment(6, QueryStrategy::Exhaustive, 0, 200, 15);
    EXPECT_EQ(exhaustive.successes, exhaustive.trials);
}

TEST(Experiments, relation_statistics_invariants) {
    auto rep = relation_statistics(8, 2000, 16);
    // Each event separately: a in B with (1/2)(1 - 1/15), b in B^perp with 7/15.
    const double pa = 0.5 * 14.0 / 15.0, pb = 7.0 / 15.0;
    EXPECT_NEAR(rep.extras.at("a_in_b") / 2000.0, pa, 4 * binomial_sigma(pa, 2000));
    EXPECT_NEAR(rep.extras.at("b_in_b_dual") / 2000.0, pb, 4 * binomial_sigma(pb, 2000));
    expect_rate(rep, pa * pb);
    EXPECT_EQ(rep.extras.at("intersection_dim_min"), 3.0);
    EXPECT_EQ(rep.extras.at("intersection_dim_max"), 3.0);
}

TEST(Experiments, two_faced_demo_modes) {
    stack::TsParams p = stack::TsParams::defaults(16);
    p.n = 24;
    p.hash_bits = 8;
    Rng rng(17);
    auto honest = two_faced_demo(p, AliceMode::Honest, rng);
    EXPECT_TRUE(honest.alice_signed);
    EXPECT_TRUE(honest.bob_accepts);
    EXPECT_TRUE(honest.charlie_accepts);
    EXPECT_EQ(honest.verdict, "consistent");
    auto two = two_faced_demo(p, AliceMode::TwoTokens, rng);
    EXPECT_TRUE(two.bob_accepts && two.charlie_accepts);
    EXPECT_FALSE(two.lines.empty());
}
