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

#ifndef QTSL_GAMES_HPP
#define QTSL_GAMES_HPP

#include <any>
#include <functional>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtsl/bytes.hpp"
#include "qtsl/ot1.hpp"
#include "qtsl/privts.hpp"
#include "qtsl/stack.hpp"

namespace qtsl::games {

using f2::F2Vector;
using Document = Bytes;

// ---------------------------------------------------------------------------
// Statistics.

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval; z = 1.96 gives 95%.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);
/// Binomial standard deviation of a rate estimate: sqrt(p(1-p)/trials).
double binomial_sigma(double p, std::uint64_t trials);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares fit of log2(y) against x.
LinearFit log2_linear_fit(const std::vector<double> &x, const std::vector<double> &y);

// ---------------------------------------------------------------------------
// Reports.

struct GameReport {
    std::string game;
    std::string scheme;
    std::string strategy;
    std::map<std::string, std::int64_t> params;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    Interval wilson95;
    std::optional<double> analytic;
    std::string analytic_formula;
    std::map<std::string, double> extras;

    /// Sets rate and the Wilson interval from successes / trials.
    void finish();
    /// One JSON object, keys sorted, no whitespace.
    std::string to_json_line() const;
};

// ---------------------------------------------------------------------------
// Scheme interface.

/// Raised when a strategy uses something its capability does not grant.
class CapabilityViolation : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct SchemeInfo {
    std::string layer;
    std::size_t n = 0;
    std::size_t r = 1;
    unsigned kappa = 0;
    bool has_oracle = false;
};

/// Narrow, type-erased view of one protocol layer. Keys live inside the
/// adapter and are replaced by keygen; tokens and signatures travel as
/// std::any holding the layer's own types.
class GameScheme {
   public:
    virtual ~GameScheme() = default;

    virtual SchemeInfo info() const = 0;
    virtual void keygen(Rng &rng) = 0;
    virtual std::any mint(Rng &rng) = 0;
    /// Honest signing; throws ot1::TokenSpent on a used token.
    virtual std::optional<std::any> sign(const Document &doc, std::any &token, Rng &rng) = 0;
    virtual bool verify(const Document &doc, const std::any &sig) = 0;
    virtual bool verify_token(std::any &token, Rng &rng) = 0;
    virtual bool revoke(std::any &token, Rng &rng) = 0;
    virtual bool same_signature(const std::any &a, const std::any &b) const = 0;
    virtual Document random_document(Rng &rng) const = 0;

    /// The one-bit registers inside a token, in signing order.
    virtual std::vector<ot1::Ot1Token *> registers(std::any &token) = 0;
    /// Bits the registers sign for `doc` (identity below the hash layer).
    virtual std::vector<bool> digest(const std::any &token, const Document &doc) const = 0;
    /// Signature object from one measured vector per register.
    virtual std::any assemble(const Document &doc, const std::any &token, std::vector<F2Vector> outcomes) const = 0;

    /// Membership query against register `component`'s oracle. Private
    /// layers raise CapabilityViolation.
    virtual bool query(std::size_t component, const F2Vector &v, bool p) = 0;
    virtual void set_oracle_mode(ot1::OracleMode mode) = 0;

    /// Measures every register in the basis the document selects, whatever
    /// state it holds, and marks the token spent. nullopt on a zero or
    /// unsupported outcome.
    std::optional<std::any> sign_unchecked(const Document &doc, std::any &token, Rng &rng);
};

std::unique_ptr<GameScheme> make_ot1_scheme(std::size_t n, unsigned kappa = 16);
std::unique_ptr<GameScheme> make_otr_scheme(std::size_t n, std::size_t r, unsigned kappa = 16);
std::unique_ptr<GameScheme> make_ot_scheme(std::size_t n, std::size_t hash_bits, unsigned kappa = 16);
std::unique_ptr<GameScheme> make_ts_scheme(const stack::TsParams &params);
std::unique_ptr<GameScheme> make_priv_ot1_scheme(std::size_t n, unsigned kappa = 16);
std::unique_ptr<GameScheme> make_priv_ot_scheme(std::size_t n, std::size_t hash_bits, unsigned kappa = 16);
std::unique_ptr<GameScheme> make_tm_scheme(const privts::TmParams &params);

/// Builds an adapter by layer name: ot1, otr, ot, ts, priv-ot1, priv-ot, tm.
std::unique_ptr<GameScheme> make_scheme(const std::string &layer, std::size_t n, std::size_t r, unsigned kappa);

// ---------------------------------------------------------------------------
// Adversaries.

struct Capability {
    bool oracle_access = true;
    std::optional<std::uint64_t> query_budget;
    bool unbounded_desk = false;
};

/// Everything a strategy may touch during one trial.
class AdversaryView {
   public:
    AdversaryView(GameScheme &scheme, Capability cap, std::vector<std::any> tokens, Rng &rng, std::size_t l,
                  std::size_t t)
        : scheme_(scheme), cap_(cap), tokens_(std::move(tokens)), rng_(rng), l_(l), t_(t) {
    }

    GameScheme &scheme() {
        return scheme_;
    }
    const Capability &capability() const {
        return cap_;
    }
    Rng &rng() {
        return rng_;
    }
    std::size_t l() const {
        return l_;
    }
    /// Signatures the revocability game asks for; 0 elsewhere.
    std::size_t t() const {
        return t_;
    }
    std::vector<std::any> &tokens() {
        return tokens_;
    }
    /// Adds a token the strategy built itself; returns its index.
    std::size_t add_token(std::any token) {
        tokens_.push_back(std::move(token));
        return tokens_.size() - 1;
    }
    /// Counted, capability-checked oracle query.
    bool query(std::size_t component, const F2Vector &v, bool p);
    /// Public verification; needs oracle access.
    bool verify(const Document &doc, const std::any &sig);
    std::uint64_t queries() const {
        return queries_;
    }

   private:
    GameScheme &scheme_;
    Capability cap_;
    std::vector<std::any> tokens_;
    Rng &rng_;
    std::size_t l_;
    std::size_t t_;
    std::uint64_t queries_ = 0;
};

struct Forgery {
    std::vector<std::pair<Document, std::any>> signatures;
    /// Indices into AdversaryView::tokens(); repeats mean the same token is
    /// handed back more than once.
    std::vector<std::size_t> returned;
    /// Strategy-specific counters, summed into the report extras.
    std::map<std::string, double> notes;
};

class Strategy {
   public:
    virtual ~Strategy() = default;
    virtual std::string name() const = 0;
    virtual Capability capability() const {
        return {};
    }
    virtual Forgery run(AdversaryView &view) = 0;
};

/// Signs one distinct document per token (t of them in the revocability
/// game, returning the rest).
std::unique_ptr<Strategy> honest_strategy();
/// Signs two distinct documents with token 0, and one with each other token.
std::unique_ptr<Strategy> naive_double_sign();
/// Signs with every token, then hands every token back.
std::unique_ptr<Strategy> spent_token_return();
/// Hands token 0 back twice and every other token once.
std::unique_ptr<Strategy> revoke_twice();
/// Without oracle access: signs a random document and returns the
/// measured token.
std::unique_ptr<Strategy> measure_and_guess();
/// Unbounded desk strategy for one-register layers: measures v in A,
/// forges (0, v) and returns |B> for a uniformly chosen n/2-dimensional B
/// containing v (enumerated for n <= 6).
std::unique_ptr<Strategy> consistent_subspace_guess();
/// Declares no oracle access, then queries anyway.
std::unique_ptr<Strategy> capability_violator();
/// Signs one document and submits that pair twice.
std::unique_ptr<Strategy> same_signature_twice();
/// Finds two documents with equal digests (at most 2^9 evaluations),
/// signs one and reuses the signature for the other.
std::unique_ptr<Strategy> collision_forger();
/// Measures every register of token 0 and hands back the token plus a
/// classical copy of the collapsed state.
std::unique_ptr<Strategy> measure_and_rebuild();

std::unique_ptr<Strategy> make_strategy(const std::string &name);

// ---------------------------------------------------------------------------
// Games. Trial i draws from Rng(seed).split(i) and runs keygen afresh.

/// ell tokens; success iff the strategy's pairs pass verify_{ell+1}.
/// Extras: prefix_valid (every pair but the last verifies), violations.
GameReport game_unforgeability(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                               std::uint64_t seed);
/// verify'_{ell+1}: distinct (document, signature) pairs suffice.
GameReport game_super_security(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                               std::uint64_t seed);
/// Success iff verify_t passes and ell - t + 1 revocations pass.
GameReport game_revocability(GameScheme &scheme, Strategy &strategy, std::size_t l, std::size_t t,
                             std::uint64_t trials, std::uint64_t seed);

enum class Destruction { Revoke, VerifyToken };

/// Oracles are Withheld while the strategy runs. Success iff ell returned
/// tokens pass the destruction check and some pair verifies.
GameReport game_everlasting(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                            std::uint64_t seed, Destruction destruction = Destruction::VerifyToken);
/// ell tokens in, success iff ell + 1 distinct returned tokens pass
/// verify-token.
GameReport game_money(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                      std::uint64_t seed);

/// Replaces the fresh token's state before testing.
using TokenPreparer = std::function<void(GameScheme &, std::any &, Rng &)>;

/// k verify-token calls then one honest sign-and-verify. Success is the
/// joint event; extras: first_accepted, all_accepted.
GameReport game_testability(GameScheme &scheme, std::size_t k, std::uint64_t trials, std::uint64_t seed,
                            const TokenPreparer &prepare = nullptr);
/// Two tokens sign one document; success iff the signatures are equal.
GameReport game_unpredictability(GameScheme &scheme, std::uint64_t trials, std::uint64_t seed);
/// As game_unpredictability, through mds_sign or its memoizing wrapper.
GameReport game_mds_unpredictability(const stack::TsParams &params, bool memoized, std::uint64_t trials,
                                     std::uint64_t seed);

enum class QueryStrategy { MeasureAndGuess, RandomQuery, Exhaustive };

/// One token plus counted oracle queries; success iff the output (a, b)
/// lies in (A \ {0}) x (A^perp \ {0}). Extras: mean_queries.
GameReport query_count_experiment(std::size_t n, QueryStrategy strategy, std::uint64_t budget,
                                  std::uint64_t trials, std::uint64_t seed);

/// (A, B) in R, a in A\{0}, b in A^perp\{0}; success iff (a, b) is also in
/// Lambda(B). Extras: min/max |<A|B>|, min/max dim(A cap B).
GameReport relation_statistics(std::size_t n, std::uint64_t samples, std::uint64_t seed);

enum class AliceMode { Honest, Equivocate, TwoTokens };

struct Transcript {
    std::vector<std::string> lines;
    bool bob_accepts = false;
    bool charlie_accepts = false;
    bool alice_signed = false;
    /// "consistent", "equivocation detected", "equivocation possible with l=2",
    /// or "no signature".
    std::string verdict;
};

/// Alice sends a signed preference to Bob and (possibly) the opposite to
/// Charlie; they compare notes.
Transcript two_faced_demo(const stack::TsParams &params, AliceMode mode, Rng &rng);
/// Over runs where Alice's first signature verified: rate at which
/// Charlie rejects.
GameReport two_faced_experiment(const stack::TsParams &params, AliceMode mode, std::uint64_t runs,
                                std::uint64_t seed);

}  // namespace qtsl::games

#endif
