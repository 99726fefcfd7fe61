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

#ifndef QTSL_OT1_HPP
#define QTSL_OT1_HPP

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>

#include "qtsl/f2lin.hpp"
#include "qtsl/qsim.hpp"
#include "qtsl/rng.hpp"

namespace qtsl::ot1 {

using f2::F2Vector;
using f2::Subspace;

using KeyId = std::array<std::uint8_t, 16>;

enum class OracleMode { Public, Withheld };
enum class Lifecycle { Fresh, Spent };

/// Raised when a query reaches an oracle in Withheld mode.
class OracleWithheld : public std::runtime_error {
   public:
    OracleWithheld() : std::runtime_error("membership oracle is withheld") {
    }
};

/// Raised when the honest API is asked to sign with a consumed token.
class TokenSpent : public std::logic_error {
   public:
    TokenSpent() : std::logic_error("signing token already spent") {
    }
};

class MembershipOracle;

namespace simulation {
/// The hidden subspace behind an oracle. Only the simulation plumbing
/// (token verification, SIMULATION-ONLY serialization) calls this; a real
/// deployment would hold an obfuscated program with no such accessor.
const Subspace &hidden_subspace(const MembershipOracle &oracle);
}  // namespace simulation

/// Sealed stand-in for the obfuscated program computing chi_{A*}.
///
/// The public surface is exactly query / mode / query_count / key_id. Each
/// query increments the counter by one, including queries made on behalf
/// of token verification.
class MembershipOracle {
   public:
    MembershipOracle(Subspace hidden, KeyId key_id);
    MembershipOracle(const MembershipOracle &) = delete;
    MembershipOracle &operator=(const MembershipOracle &) = delete;

    /// chi_star(A, v, p). Throws OracleWithheld in Withheld mode.
    bool query(const F2Vector &v, bool p) const;

    OracleMode mode() const {
        return mode_.load();
    }
    void set_mode(OracleMode mode) {
        mode_.store(mode);
    }
    std::uint64_t query_count() const {
        return count_.load();
    }
    const KeyId &key_id() const {
        return key_id_;
    }

   private:
    friend const Subspace &simulation::hidden_subspace(const MembershipOracle &oracle);
    friend bool verify_state(const MembershipOracle &, qsim::CosetState &, Rng &);
    friend bool ot1_verify(const MembershipOracle &, bool, const F2Vector &);

    Subspace hidden_;
    KeyId key_id_;
    std::atomic<OracleMode> mode_{OracleMode::Public};
    mutable std::atomic<std::uint64_t> count_{0};
};

using Ot1PublicKey = std::shared_ptr<MembershipOracle>;

struct Ot1SecretKey {
    Subspace space;
    KeyId key_id{};
};

struct Ot1KeyPair {
    Ot1PublicKey pk;
    Ot1SecretKey sk;
};

struct Ot1Token {
    qsim::CosetState state;
    KeyId key_id{};
    Lifecycle lifecycle = Lifecycle::Fresh;
};

struct Ot1Signature {
    bool alpha = false;
    F2Vector sig;
    KeyId key_id{};
    bool operator==(const Ot1Signature &) const = default;
};

/// n(kappa) = 2 * ceil(log2(kappa + 2)^1.5).
std::size_t default_dimension(unsigned kappa);

KeyId random_key_id(Rng &rng);

Ot1KeyPair ot1_keygen(unsigned kappa, Rng &rng, std::optional<std::size_t> n_override = std::nullopt);
Ot1Token ot1_token_gen(const Ot1SecretKey &sk);

/// Apply H^n iff alpha, then measure in the standard basis. Leaves the
/// post-measurement state in `state`. Returns nullopt for a state the coset
/// model cannot evolve. Ignores token lifecycle; adversaries and revocation
/// use this directly.
std::optional<F2Vector> sign_register(bool alpha, qsim::CosetState &state, Rng &rng);

/// Honest signing. Returns nullopt on the zero outcome (the scheme's only
/// failure mode). Throws TokenSpent if the token was already used.
std::optional<Ot1Signature> ot1_sign(bool alpha, Ot1Token &token, Rng &rng);

/// One oracle query; the zero vector is always rejected.
bool ot1_verify(const MembershipOracle &pk, bool alpha, const F2Vector &sig);
bool ot1_verify(const MembershipOracle &pk, const Ot1Signature &sig);

/// Two-query projective test {|A><A|, I - |A><A|} on an arbitrary state.
/// Throws OracleWithheld in Withheld mode.
bool verify_state(const MembershipOracle &pk, qsim::CosetState &state, Rng &rng);
/// Token test; an accepted token keeps its lifecycle and can still sign.
bool ot1_verify_token(const MembershipOracle &pk, Ot1Token &token, Rng &rng);

/// Sign a uniformly random bit with the token and verify it. Consumes the
/// token.
bool ot1_revoke(const MembershipOracle &pk, Ot1Token &token, Rng &rng);

}  // namespace qtsl::ot1

#endif
