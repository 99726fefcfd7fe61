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

#include <algorithm>
#include <map>

#include "qtsl/money.hpp"

using namespace qtsl;
using namespace qtsl::money;

namespace {

stack::TsParams small_params() {
    auto p = stack::TsParams::defaults(16);
    p.n = 24;
    p.hash_bits = 16;
    return p;
}

struct Fixture {
    Rng rng{42};
    stack::TsKeyPair keys = stack::ts_keygen(small_params(), rng);

    Check write(const std::string &payee, std::uint32_t branch, std::uint64_t t) {
        for (;;) {
            auto coin = coin_mint(keys.sk, rng);
            try {
                return check_write(coin, payee, branch, t, rng);
            } catch (const CheckWriteError &) {
            }
        }
    }
    Branch branch(std::uint32_t id, Policy policy, bool mint = true) {
        std::optional<stack::TsSecretKey> sk;
        if (mint) {
            sk = keys.sk;
        }
        return Branch(id, policy, keys.pk, sk, rng.split(id));
    }
};

std::vector<std::string> sorted_lines(const BankReport &r) {
    std::vector<std::string> out;
    for (const auto &e : r.ledger) {
        out.push_back(to_json_line(e));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Money, check_document_escapes_separators) {
    Nonce nonce{};
    nonce[15] = 0xab;
    EXPECT_EQ(check_document("alice", 3, 100, nonce),
              "QCHK1|payee=alice|branch=3|time=100|nonce=000000000000000000000000000000ab");
    EXPECT_EQ(check_document("a|b\\c", 0, 0, Nonce{}),
              "QCHK1|payee=a\\|b\\\\c|branch=0|time=0|nonce=00000000000000000000000000000000");
    // Escaping keeps distinct payees distinct.
    EXPECT_NE(check_document("a|branch=1", 2, 0, Nonce{}), check_document("a", 1, 0, Nonce{}));
}

TEST(Money, coin_lifecycle) {
    Fixture f;
    auto coin = coin_mint(f.keys.sk, f.rng);
    EXPECT_TRUE(coin_verify(f.keys.pk, coin, f.rng));
    EXPECT_FALSE(coin.spent());
    EXPECT_FALSE(coin.serial().empty());
    auto other = coin_mint(f.keys.sk, f.rng);
    EXPECT_NE(coin.serial(), other.serial());
    for (;;) {
        auto c = coin_mint(f.keys.sk, f.rng);
        try {
            auto check = check_write(c, "bob", 1, kScenarioStartTime, f.rng);
            EXPECT_TRUE(check_verify(f.keys.pk, check));
            EXPECT_TRUE(c.spent());
            EXPECT_THROW(check_write(c, "bob", 1, kScenarioStartTime, f.rng), ot1::TokenSpent);
            break;
        } catch (const CheckWriteError &) {
        }
    }
}

TEST(Money, ledger_branch_cashes_once) {
    Fixture f;
    auto b = f.branch(1, Policy::Ledger);
    const auto t = kScenarioStartTime;
    auto check = f.write("bob", 1, t);
    auto first = b.cash(check, t + 10);
    EXPECT_EQ(first.event.kind, EventKind::Cash);
    ASSERT_TRUE(first.coin);
    EXPECT_TRUE(first.event.issued);
    EXPECT_TRUE(coin_verify(f.keys.pk, *first.coin, f.rng));
    EXPECT_EQ(b.cash(check, t + 20).event.kind, EventKind::RejectDuplicate);
    EXPECT_EQ(b.records(), 1u);
}

TEST(Money, rejections) {
    Fixture f;
    auto b = f.branch(1, Policy::Ledger);
    const auto t = kScenarioStartTime;
    auto wrong = f.write("bob", 2, t);
    EXPECT_EQ(b.cash(wrong, t).event.kind, EventKind::RejectWrongBranch);

    auto stale = f.write("bob", 1, t);
    EXPECT_EQ(b.cash(stale, t + kLedgerSkewSeconds + 1).event.kind, EventKind::RejectStale);
    EXPECT_EQ(b.cash(stale, t + kLedgerSkewSeconds).event.kind, EventKind::Cash);

    auto forged = f.write("bob", 1, t);
    forged.payee = "mallory";
    EXPECT_EQ(b.cash(forged, t).event.kind, EventKind::RejectBadSignature);
}

TEST(Money, escrow_branch_keeps_checks) {
    Fixture f;
    auto b = f.branch(1, Policy::Ledger, false);
    EXPECT_EQ(b.issuance(), Issuance::Escrow);
    auto check = f.write("bob", 1, kScenarioStartTime);
    auto r = b.cash(check, kScenarioStartTime);
    EXPECT_EQ(r.event.kind, EventKind::Cash);
    EXPECT_FALSE(r.coin);
    ASSERT_EQ(b.escrow().size(), 1u);
    EXPECT_EQ(b.escrow()[0], check);
}

TEST(Money, daily_window) {
    Fixture f;
    auto b = f.branch(1, Policy::DailyWindow);
    const auto day = kScenarioStartTime;
    auto check = f.write("bob", 1, day + 100);
    EXPECT_EQ(b.cash(check, day + 200).event.kind, EventKind::RejectStale);
    EXPECT_EQ(b.cash(check, day + kSecondsPerDay + 5).event.kind, EventKind::Cash);
    EXPECT_EQ(b.cash(check, day + kSecondsPerDay + 50).event.kind, EventKind::RejectDuplicate);
    EXPECT_EQ(b.cash(check, day + 2 * kSecondsPerDay).event.kind, EventKind::RejectStale);
    EXPECT_EQ(b.records(), 0u);
}

TEST(Money, scenario_script) {
    const std::string script =
        "# two branches\n"
        "BRANCH 1 ledger mint\n"
        "BRANCH 2 ledger escrow\n"
        "MINT alice c0\n"
        "WRITE c0 k0 bob 1\n"
        "WRITE c0 k1 bob 2\n"
        "CASH k0 1 c1\n"
        "CASH k0 2\n"
        "TICK 5\n"
        "CASH k0 1\n"
        "CASH k1 2\n";
    auto report = simulate_bank(script, small_params(), 7);
    EXPECT_EQ(report.coins_minted, 1u);
    EXPECT_EQ(report.spent_coin_writes, 1u);
    EXPECT_EQ(report.coins_burned, 1u);
    ASSERT_EQ(report.ledger.size(), 3u);
    EXPECT_EQ(report.ledger[0].kind, EventKind::Cash);
    EXPECT_EQ(report.ledger[1].kind, EventKind::RejectWrongBranch);
    EXPECT_EQ(report.ledger[2].kind, EventKind::RejectDuplicate);
    EXPECT_EQ(report.ledger[0].label, "k0");
}

TEST(Money, scenario_errors) {
    EXPECT_THROW(simulate_bank("FLY 1\n", small_params(), 1), ScenarioError);
    EXPECT_THROW(simulate_bank("BRANCH 1 weekly mint\n", small_params(), 1), ScenarioError);
    EXPECT_THROW(simulate_bank("BRANCH 1 ledger mint\nCASH k9 1\n", small_params(), 1), ScenarioError);
    EXPECT_THROW(simulate_bank("MINT a c0\nWRITE c1 k0 bob 1\n", small_params(), 1), ScenarioError);
    EXPECT_THROW(simulate_bank("BRANCH 1 ledger mint\nBRANCH 1 ledger mint\n", small_params(), 1), ScenarioError);
}

TEST(Money, simulation_is_deterministic_and_permutation_invariant) {
    Rng rng(3);
    for (int i = 0; i < 5; i++) {
        const auto script = random_scenario(rng, 60);
        auto a = simulate_bank(script, small_params(), 11);
        auto b = simulate_bank(script, small_params(), 11);
        ASSERT_EQ(a.ledger, b.ledger);
        for (std::uint64_t p = 1; p <= 3; p++) {
            auto c = simulate_bank(script, small_params(), 11, p);
            EXPECT_EQ(sorted_lines(a), sorted_lines(c)) << script;
        }
    }
}

TEST(Money, conservation_over_random_scenarios) {
    Rng rng(4);
    for (int i = 0; i < 20; i++) {
        const auto script = random_scenario(rng, 80);
        auto r = simulate_bank(script, small_params(), 100 + i, i);
        std::map<std::string, int> cashed;
        std::size_t cash_events = 0;
        std::size_t issued = 0;
        for (const auto &e : r.ledger) {
            if (e.kind == EventKind::Cash) {
                cash_events++;
                issued += e.issued ? 1 : 0;
                EXPECT_EQ(++cashed[e.label], 1) << "check cashed twice: " << e.label;
            } else {
                EXPECT_FALSE(e.issued);
            }
        }
        EXPECT_EQ(issued, r.coins_issued);
        EXPECT_LE(cash_events, r.checks_written);
        EXPECT_LE(r.checks_written, r.coins_burned);
        EXPECT_LE(r.coins_burned, r.coins_minted + r.coins_issued);
    }
}

TEST(Money, ledger_json_line) {
    LedgerEvent e;
    e.kind = EventKind::RejectStale;
    e.digest = {0xab, 0x01};
    e.branch_id = 4;
    e.time = 9;
    e.label = "k1";
    const auto line = to_json_line(e);
    EXPECT_NE(line.find("\"ab01\""), std::string::npos) << line;
    EXPECT_NE(line.find(std::string(to_string(EventKind::RejectStale))), std::string::npos) << line;
}
