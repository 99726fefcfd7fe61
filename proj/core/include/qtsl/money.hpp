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

#ifndef QTSL_MONEY_HPP
#define QTSL_MONEY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qtsl/bytes.hpp"
#include "qtsl/stack.hpp"

namespace qtsl::money {

/// A coin is a testable signing token.
struct Coin {
    stack::TsToken token;

    /// SHA-256 of the encoded OT key.
    Bytes serial() const;
    bool spent() const {
        return token.spent();
    }
};

Coin coin_mint(stack::TsSecretKey &sk, Rng &rng);
/// Non-destructive; an accepted coin passes again.
bool coin_verify(const stack::TsPublicKey &pk, Coin &coin, Rng &rng);

using Nonce = std::array<std::uint8_t, 16>;

struct Check {
    std::string payee;
    std::uint32_t branch_id = 0;
    std::uint64_t timestamp = 0;
    Nonce nonce{};
    stack::TsSignature signature;
    bool operator==(const Check &) const = default;
};

/// "QCHK1|payee=<escaped>|branch=<dec>|time=<dec>|nonce=<32 hex>", with
/// '\' and '|' in the payee escaped by a backslash.
std::string check_document(std::string_view payee, std::uint32_t branch_id, std::uint64_t timestamp,
                           const Nonce &nonce);
std::string check_document(const Check &check);
/// SHA-256 of the check document; the value branches record.
Bytes check_digest(const Check &check);

/// Raised when a write cannot produce a check.
class CheckWriteError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Burns the coin to sign a check. Throws ot1::TokenSpent on a used coin
/// and CheckWriteError if signing fails (the coin is still consumed).
Check check_write(Coin &coin, std::string_view payee, std::uint32_t branch_id, std::uint64_t timestamp, Rng &rng);
bool check_verify(const stack::TsPublicKey &pk, const Check &check);

enum class EventKind { Cash, RejectDuplicate, RejectWrongBranch, RejectStale, RejectBadSignature };

std::string_view to_string(EventKind kind);

struct LedgerEvent {
    EventKind kind = EventKind::Cash;
    Bytes digest;
    std::uint32_t branch_id = 0;
    std::uint64_t time = 0;
    /// Cash only: a replacement coin was issued (false for escrow branches).
    bool issued = false;
    /// Scenario name of the check, if any.
    std::string label;
    bool operator==(const LedgerEvent &) const = default;
};

/// One JSON object, keys sorted, no whitespace.
std::string to_json_line(const LedgerEvent &event);

enum class Policy { Ledger, DailyWindow };
enum class Issuance { Mint, Escrow };

inline constexpr std::uint64_t kLedgerSkewSeconds = 120;
inline constexpr std::uint64_t kSecondsPerDay = 86400;

struct CashResult {
    LedgerEvent event;
    std::optional<Coin> coin;
};

/// One bank branch: an isolated state machine holding its own records.
///
/// Checks are tested in order: signature, branch id, policy. Ledger policy
/// rejects checks more than kLedgerSkewSeconds away from `now` and any
/// digest seen before. Daily-window policy accepts only checks dated the
/// previous UTC day, each at most once; its record is dropped at rollover.
class Branch {
   public:
    /// Mint branches need the TS secret key; escrow branches hold cashed
    /// checks and issue nothing.
    Branch(std::uint32_t id, Policy policy, stack::TsPublicKey pk, std::optional<stack::TsSecretKey> mint_sk,
           Rng rng);

    CashResult cash(const Check &check, std::uint64_t now);

    std::uint32_t id() const {
        return id_;
    }
    Policy policy() const {
        return policy_;
    }
    Issuance issuance() const {
        return mint_sk_ ? Issuance::Mint : Issuance::Escrow;
    }
    const std::vector<Check> &escrow() const {
        return escrow_;
    }
    std::size_t records() const {
        return policy_ == Policy::Ledger ? cashed_.size() : accepted_today_.size();
    }

   private:
    std::uint32_t id_;
    Policy policy_;
    stack::TsPublicKey pk_;
    std::optional<stack::TsSecretKey> mint_sk_;
    Rng rng_;
    std::set<Bytes> cashed_;
    std::uint64_t current_day_ = 0;
    std::set<Bytes> accepted_today_;
    std::vector<Check> escrow_;
};

/// Raised for malformed or inconsistent scenario scripts.
class ScenarioError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kScenarioStartTime = 1767225600;  // 2026-01-01T00:00:00Z

struct BankReport {
    std::vector<LedgerEvent> ledger;
    std::size_t coins_minted = 0;
    /// Writes that consumed a fresh coin, successful or not.
    std::size_t coins_burned = 0;
    std::size_t checks_written = 0;
    std::size_t coins_issued = 0;
    std::size_t spent_coin_writes = 0;
};

/// Replays a scenario script.
///
///     BRANCH <id> ledger|daily mint|escrow
///     MINT <actor> <coin>
///     WRITE <coin> <check> <payee> <branch>
///     CASH <check> <branch> [<new-coin>]
///     TICK <seconds>
///
/// Blank lines and lines starting with '#' are ignored. Time starts at
/// kScenarioStartTime. Each branch draws from its own stream split from
/// `seed`. When `permute_seed` is set, every run of consecutive CASH lines
/// is processed branch by branch in a shuffled branch order.
BankReport simulate_bank(std::string_view script, const stack::TsParams &params, std::uint64_t seed,
                         std::optional<std::uint64_t> permute_seed = std::nullopt);

/// Random well-formed scenario with duplicate, cross-branch, stale and
/// spent-coin attempts mixed in.
std::string random_scenario(Rng &rng, std::size_t events);

}  // namespace qtsl::money

#endif
