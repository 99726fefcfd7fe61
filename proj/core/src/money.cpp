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

#include "qtsl/money.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "json.hpp"
#include "qtsl/primitives.hpp"

namespace qtsl::money {

Bytes Coin::serial() const {
    return prim::sha256(token.ot_pk);
}

Coin coin_mint(stack::TsSecretKey &sk, Rng &rng) {
    return Coin{stack::ts_token_gen(sk, rng)};
}

bool coin_verify(const stack::TsPublicKey &pk, Coin &coin, Rng &rng) {
    return stack::ts_verify_token(pk, coin.token, rng);
}

std::string check_document(std::string_view payee, std::uint32_t branch_id, std::uint64_t timestamp,
                           const Nonce &nonce) {
    std::string out = "QCHK1|payee=";
    for (char c : payee) {
        if (c == '\\' || c == '|') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out += "|branch=" + std::to_string(branch_id);
    out += "|time=" + std::to_string(timestamp);
    out += "|nonce=" + to_hex(nonce);
    return out;
}

std::string check_document(const Check &check) {
    return check_document(check.payee, check.branch_id, check.timestamp, check.nonce);
}

Bytes check_digest(const Check &check) {
    return prim::sha256(to_bytes(check_document(check)));
}

Check check_write(Coin &coin, std::string_view payee, std::uint32_t branch_id, std::uint64_t timestamp, Rng &rng) {
    if (coin.spent()) {
        throw ot1::TokenSpent();
    }
    Check check;
    check.payee = std::string(payee);
    check.branch_id = branch_id;
    check.timestamp = timestamp;
    auto nonce = rng.bytes(check.nonce.size());
    std::copy(nonce.begin(), nonce.end(), check.nonce.begin());
    auto sig = stack::ts_sign(to_bytes(check_document(check)), coin.token, rng);
    if (!sig) {
        throw CheckWriteError("signing the check failed; the coin is consumed");
    }
    check.signature = std::move(*sig);
    return check;
}

bool check_verify(const stack::TsPublicKey &pk, const Check &check) {
    return stack::ts_verify(pk, to_bytes(check_document(check)), check.signature);
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Cash:
            return "Cash";
        case EventKind::RejectDuplicate:
            return "RejectDuplicate";
        case EventKind::RejectWrongBranch:
            return "RejectWrongBranch";
        case EventKind::RejectStale:
            return "RejectStale";
        case EventKind::RejectBadSignature:
            return "RejectBadSignature";
    }
    return "?";
}

std::string to_json_line(const LedgerEvent &event) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(event.kind));
    j["digest"] = to_hex(event.digest);
    j["branch"] = event.branch_id;
    j["time"] = event.time;
    j["issued"] = event.issued;
    j["label"] = event.label;
    return j.dump();
}

Branch::Branch(std::uint32_t id, Policy policy, stack::TsPublicKey pk, std::optional<stack::TsSecretKey> mint_sk,
               Rng rng)
    : id_(id), policy_(policy), pk_(std::move(pk)), mint_sk_(std::move(mint_sk)), rng_(rng) {
}

CashResult Branch::cash(const Check &check, std::uint64_t now) {
    CashResult result;
    result.event.digest = check_digest(check);
    result.event.branch_id = id_;
    result.event.time = now;
    auto &kind = result.event.kind;
    if (!check_verify(pk_, check)) {
        kind = EventKind::RejectBadSignature;
        return result;
    }
    if (check.branch_id != id_) {
        kind = EventKind::RejectWrongBranch;
        return result;
    }
    if (policy_ == Policy::Ledger) {
        const std::uint64_t skew = now > check.timestamp ? now - check.timestamp : check.timestamp - now;
        if (skew > kLedgerSkewSeconds) {
            kind = EventKind::RejectStale;
            return result;
        }
        if (!cashed_.insert(result.event.digest).second) {
            kind = EventKind::RejectDuplicate;
            return result;
        }
    } else {
        const std::uint64_t today = now / kSecondsPerDay;
        if (today != current_day_) {
            current_day_ = today;
            accepted_today_.clear();
        }
        if (check.timestamp / kSecondsPerDay + 1 != today) {
            kind = EventKind::RejectStale;
            return result;
        }
        if (!accepted_today_.insert(result.event.digest).second) {
            kind = EventKind::RejectDuplicate;
            return result;
        }
    }
    kind = EventKind::Cash;
    if (mint_sk_) {
        result.coin = coin_mint(*mint_sk_, rng_);
        result.event.issued = true;
    } else {
        escrow_.push_back(check);
    }
    return result;
}

namespace {

std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

std::uint64_t parse_u64(const std::string &s, std::size_t line_no) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ScenarioError("line " + std::to_string(line_no) + ": expected an unsigned integer, got '" + s + "'");
    }
    return v;
}

struct Line {
    std::size_t no;
    std::vector<std::string> words;
};

class BankSim {
   public:
    BankSim(const stack::TsParams &params, std::uint64_t seed)
        : master_(seed), mint_rng_(master_.split(1)), write_rng_(master_.split(2)) {
        Rng key_rng = master_.split(0);
        keys_.emplace(stack::ts_keygen(params, key_rng));
    }

    void branch(const Line &l) {
        expect(l, 4, 4);
        const auto id64 = parse_u64(l.words[1], l.no);
        if (id64 > UINT32_MAX) {
            fail(l, "branch id out of range");
        }
        const auto id = static_cast<std::uint32_t>(id64);
        Policy policy;
        if (l.words[2] == "ledger") {
            policy = Policy::Ledger;
        } else if (l.words[2] == "daily") {
            policy = Policy::DailyWindow;
        } else {
            fail(l, "policy must be 'ledger' or 'daily'");
        }
        std::optional<stack::TsSecretKey> sk;
        if (l.words[3] == "mint") {
            sk = keys_->sk;
        } else if (l.words[3] != "escrow") {
            fail(l, "issuance must be 'mint' or 'escrow'");
        }
        if (branches_.count(id) != 0) {
            fail(l, "branch declared twice");
        }
        branches_.emplace(id, Branch(id, policy, keys_->pk, std::move(sk), master_.split((1ULL << 32) | id)));
    }

    void mint(const Line &l) {
        expect(l, 3, 3);
        if (coins_.count(l.words[2]) != 0) {
            fail(l, "coin name already in use");
        }
        coins_.emplace(l.words[2], coin_mint(keys_->sk, mint_rng_));
        report_.coins_minted++;
    }

    void write(const Line &l) {
        expect(l, 5, 5);
        auto it = coins_.find(l.words[1]);
        if (it == coins_.end()) {
            fail(l, "unknown coin '" + l.words[1] + "'");
        }
        const auto &name = l.words[2];
        if (checks_.count(name) != 0 || failed_checks_.count(name) != 0) {
            fail(l, "check name already in use");
        }
        const auto branch = parse_u64(l.words[4], l.no);
        if (branch > UINT32_MAX) {
            fail(l, "branch id out of range");
        }
        if (it->second.spent()) {
            report_.spent_coin_writes++;
            failed_checks_.insert(name);
            return;
        }
        report_.coins_burned++;
        try {
            checks_.emplace(name, check_write(it->second, l.words[3], static_cast<std::uint32_t>(branch), now_,
                                              write_rng_));
            report_.checks_written++;
        } catch (const CheckWriteError &) {
            failed_checks_.insert(name);
        }
    }

    void cash_round(const std::vector<Line> &round, std::optional<Rng> &permute) {
        // Group by branch, keeping per-branch order.
        std::vector<std::uint32_t> order;
        std::map<std::uint32_t, std::vector<const Line *>> groups;
        for (const auto &l : round) {
            expect(l, 3, 4);
            const auto b64 = parse_u64(l.words[2], l.no);
            if (b64 > UINT32_MAX || branches_.count(static_cast<std::uint32_t>(b64)) == 0) {
                fail(l, "undeclared branch " + l.words[2]);
            }
            const auto b = static_cast<std::uint32_t>(b64);
            if (groups[b].empty()) {
                order.push_back(b);
            }
            groups[b].push_back(&l);
        }
        if (permute) {
            for (std::size_t i = order.size(); i > 1; i--) {
                std::swap(order[i - 1], order[permute->uniform_below(i)]);
            }
        }
        for (auto b : order) {
            for (const Line *l : groups[b]) {
                cash(*l, branches_.at(b));
            }
        }
    }

    void tick(const Line &l) {
        expect(l, 2, 2);
        now_ += parse_u64(l.words[1], l.no);
    }

    BankReport take() {
        return std::move(report_);
    }

   private:
    void cash(const Line &l, Branch &branch) {
        const auto &name = l.words[1];
        auto it = checks_.find(name);
        if (it == checks_.end()) {
            if (failed_checks_.count(name) != 0) {
                return;
            }
            fail(l, "unknown check '" + name + "'");
        }
        auto result = branch.cash(it->second, now_);
        result.event.label = name;
        if (result.coin) {
            report_.coins_issued++;
            if (l.words.size() == 4) {
                coins_.insert_or_assign(l.words[3], std::move(*result.coin));
            }
        }
        report_.ledger.push_back(std::move(result.event));
    }

    [[noreturn]] static void fail(const Line &l, const std::string &msg) {
        throw ScenarioError("line " + std::to_string(l.no) + ": " + msg);
    }

    static void expect(const Line &l, std::size_t lo, std::size_t hi) {
        if (l.words.size() < lo || l.words.size() > hi) {
            fail(l, l.words[0] + " takes " + std::to_string(lo - 1) +
                        (hi != lo ? "-" + std::to_string(hi - 1) : std::string()) + " arguments");
        }
    }

    Rng master_;
    Rng mint_rng_;
    Rng write_rng_;
    std::optional<stack::TsKeyPair> keys_;
    std::map<std::uint32_t, Branch> branches_;
    std::map<std::string, Coin> coins_;
    std::map<std::string, Check> checks_;
    std::set<std::string> failed_checks_;
    std::uint64_t now_ = kScenarioStartTime;
    BankReport report_;
};

}  // namespace

BankReport simulate_bank(std::string_view script, const stack::TsParams &params, std::uint64_t seed,
                         std::optional<std::uint64_t> permute_seed) {
    std::vector<Line> lines;
    std::size_t no = 0;
    std::istringstream in{std::string(script)};
    std::string raw;
    while (std::getline(in, raw)) {
        no++;
        auto words = split_words(raw);
        if (words.empty() || words[0].front() == '#') {
            continue;
        }
        lines.push_back(Line{no, std::move(words)});
    }

    BankSim sim(params, seed);
    std::optional<Rng> permute;
    if (permute_seed) {
        permute.emplace(*permute_seed);
    }
    std::vector<Line> round;
    auto flush = [&] {
        if (!round.empty()) {
            sim.cash_round(round, permute);
            round.clear();
        }
    };
    for (const auto &l : lines) {
        const auto &op = l.words[0];
        if (op == "CASH") {
            round.push_back(l);
            continue;
        }
        flush();
        if (op == "BRANCH") {
            sim.branch(l);
        } else if (op == "MINT") {
            sim.mint(l);
        } else if (op == "WRITE") {
            sim.write(l);
        } else if (op == "TICK") {
            sim.tick(l);
        } else {
            throw ScenarioError("line " + std::to_string(l.no) + ": unknown event '" + op + "'");
        }
    }
    flush();
    return sim.take();
}

std::string random_scenario(Rng &rng, std::size_t events) {
    std::ostringstream out;
    const std::size_t branch_count = 2 + rng.uniform_below(3);
    for (std::size_t b = 1; b <= branch_count; b++) {
        out << "BRANCH " << b << (rng.uniform_below(4) == 0 ? " daily" : " ledger")
            << (rng.uniform_below(4) == 0 ? " escrow" : " mint") << "\n";
    }
    std::size_t coins = 0;
    std::vector<std::pair<std::string, std::size_t>> checks;  // name, branch
    for (std::size_t e = 0; e < events; e++) {
        const auto roll = rng.uniform_below(100);
        if (coins == 0 || roll < 20) {
            out << "MINT actor" << rng.uniform_below(4) << " c" << coins << "\n";
            coins++;
        } else if (roll < 50) {
            // Mostly fresh coins; sometimes a coin that may already be spent.
            const auto coin = rng.uniform_below(coins);
            const auto branch = 1 + rng.uniform_below(branch_count);
            const std::string name = "k" + std::to_string(checks.size());
            out << "WRITE c" << coin << " " << name << " payee" << rng.uniform_below(3) << " " << branch << "\n";
            checks.emplace_back(name, branch);
        } else if (roll < 90 && !checks.empty()) {
            const auto &[name, branch] = checks[rng.uniform_below(checks.size())];
            std::size_t target = branch;
            if (rng.uniform_below(5) == 0) {
                target = 1 + rng.uniform_below(branch_count);
            }
            out << "CASH " << name << " " << target << "\n";
        } else {
            const auto kind = rng.uniform_below(10);
            const std::uint64_t secs = kind < 7 ? rng.uniform_below(60) : kind < 9 ? 200 : kSecondsPerDay;
            out << "TICK " << secs << "\n";
        }
    }
    return out.str();
}

}  // namespace qtsl::money
