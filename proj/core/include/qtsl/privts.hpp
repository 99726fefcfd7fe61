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

#ifndef QTSL_PRIVTS_HPP
#define QTSL_PRIVTS_HPP

#include <optional>
#include <vector>

#include "qtsl/bytes.hpp"
#include "qtsl/ot1.hpp"
#include "qtsl/stack.hpp"

namespace qtsl::privts {

using f2::F2Vector;
using f2::Subspace;

/// Private verification key for one-bit tokens: the subspace itself.
/// Also serves as the verifier capability for the private reductions.
struct PrivOt1Key {
    Subspace space;
    ot1::KeyId id{};

    static PrivOt1Key from_secret(const ot1::Ot1SecretKey &sk) {
        return PrivOt1Key{sk.space, sk.key_id};
    }
    const ot1::KeyId &key_id() const {
        return id;
    }
    bool verify(bool alpha, const F2Vector &sig) const;
    bool verify_state(qsim::CosetState &state, Rng &rng) const;
};

PrivOt1Key priv_ot1_keygen(unsigned kappa, Rng &rng, std::optional<std::size_t> n = std::nullopt);
ot1::Ot1Token priv_token_gen(const PrivOt1Key &k);
std::optional<ot1::Ot1Signature> priv_sign(bool alpha, ot1::Ot1Token &token, Rng &rng);
/// chi_star(A, sig, alpha) evaluated from the key; zero is rejected.
bool priv_verify(const PrivOt1Key &k, bool alpha, const F2Vector &sig);
bool priv_verify_token(const PrivOt1Key &k, ot1::Ot1Token &token, Rng &rng);
bool priv_revoke(const PrivOt1Key &k, ot1::Ot1Token &token, Rng &rng);

/// Private OT key: the verifier holds every subspace.
using PrivOtKey = stack::OtPublicKey<PrivOt1Key>;

inline PrivOtKey priv_ot_key(const stack::OtSecretKey &sk) {
    return stack::ot_public_key<PrivOt1Key>(sk);
}

// ---------------------------------------------------------------------------
// TM: many private tokens under one MAC key and one encryption key.

struct TmParams {
    unsigned kappa = 16;
    std::size_t n = 0;
    std::size_t hash_bits = 256;

    static TmParams defaults(unsigned kappa);
    bool operator==(const TmParams &) const = default;
};

struct TmKey {
    TmParams params;
    Bytes mac_key;
    Bytes enc_key;
};

struct TmToken {
    Bytes enc_key_blob;
    Bytes tag;
    stack::OtToken inner;
    bool spent() const {
        return inner.otr.spent();
    }
};

struct TmSignature {
    Bytes enc_key_blob;
    Bytes tag;
    stack::OtrSignature inner;
    bool operator==(const TmSignature &) const = default;
};

enum class TmStep { CheckTag, Decrypt, VerifyInner };

/// Steps a verifier actually performed, in order.
using TmTrace = std::vector<TmStep>;

TmKey tm_keygen(const TmParams &params, Rng &rng);
/// Fresh inner key k1 per token; the blob is enc_e(k1), the tag mac_k(blob).
TmToken tm_token_gen(const TmKey &key, Rng &rng);
std::optional<TmSignature> tm_sign(ByteView document, TmToken &token, Rng &rng);
/// Tag, then decryption, then the inner signature. Stops at the first
/// failure.
bool tm_verify(const TmKey &key, ByteView document, const TmSignature &sig, TmTrace *trace = nullptr);
bool tm_verify_token(const TmKey &key, TmToken &token, Rng &rng, TmTrace *trace = nullptr);
bool tm_revoke(const TmKey &key, TmToken &token, Rng &rng);

}  // namespace qtsl::privts

#endif
