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

#ifndef QTSL_STACK_HPP
#define QTSL_STACK_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qtsl/bytes.hpp"
#include "qtsl/f2lin.hpp"
#include "qtsl/ot1.hpp"
#include "qtsl/primitives.hpp"
#include "qtsl/qsim.hpp"
#include "qtsl/rng.hpp"

namespace qtsl::stack {

using f2::F2Vector;
using ot1::KeyId;

/// Verifier capability backed by a sealed membership oracle.
struct OracleCapability {
    ot1::Ot1PublicKey oracle;

    static OracleCapability from_secret(const ot1::Ot1SecretKey &sk) {
        return OracleCapability{std::make_shared<ot1::MembershipOracle>(sk.space, sk.key_id)};
    }
    const KeyId &key_id() const {
        return oracle->key_id();
    }
    bool verify(bool alpha, const F2Vector &sig) const {
        return ot1::ot1_verify(*oracle, alpha, sig);
    }
    bool verify_state(qsim::CosetState &state, Rng &rng) const {
        return ot1::verify_state(*oracle, state, rng);
    }
};

// ---------------------------------------------------------------------------
// OTR: r-restricted one-time scheme, one OT1 instance per document bit.

struct OtrSecretKey {
    std::vector<ot1::Ot1SecretKey> components;
    std::size_t r() const {
        return components.size();
    }
};

template <class Cap>
struct OtrPublicKey {
    std::vector<Cap> components;
    std::size_t r() const {
        return components.size();
    }
};

template <class Cap>
struct OtrKeyPair {
    OtrPublicKey<Cap> pk;
    OtrSecretKey sk;
};

struct OtrToken {
    std::vector<ot1::Ot1Token> components;
    bool spent() const;
};

struct OtrSignature {
    std::vector<bool> alpha;
    std::vector<F2Vector> sigs;
    bool operator==(const OtrSignature &) const = default;
};

OtrSecretKey otr_secret_keygen(unsigned kappa, std::size_t r, Rng &rng, std::optional<std::size_t> n = std::nullopt);

template <class Cap>
OtrPublicKey<Cap> otr_public_key(const OtrSecretKey &sk) {
    OtrPublicKey<Cap> pk;
    pk.components.reserve(sk.r());
    for (const auto &c : sk.components) {
        pk.components.push_back(Cap::from_secret(c));
    }
    return pk;
}

OtrKeyPair<OracleCapability> otr_keygen(unsigned kappa, std::size_t r, Rng &rng,
                                        std::optional<std::size_t> n = std::nullopt);
OtrToken otr_token_gen(const OtrSecretKey &sk);

/// Signs every component regardless of lifecycle and marks them Spent.
/// Returns nullopt if any component fails.
std::optional<OtrSignature> otr_sign_unchecked(const std::vector<bool> &alpha, OtrToken &token, Rng &rng);

/// Throws ot1::TokenSpent if any component was used, std::invalid_argument
/// if |alpha| != r.
std::optional<OtrSignature> otr_sign(const std::vector<bool> &alpha, OtrToken &token, Rng &rng);

template <class Cap>
bool otr_verify(const OtrPublicKey<Cap> &pk, const std::vector<bool> &alpha, const OtrSignature &sig) {
    const std::size_t r = pk.r();
    if (alpha.size() != r || sig.alpha != alpha || sig.sigs.size() != r) {
        return false;
    }
    for (std::size_t i = 0; i < r; i++) {
        if (!pk.components[i].verify(alpha[i], sig.sigs[i])) {
            return false;
        }
    }
    return true;
}

/// Tests every component (no short circuit) and accepts iff all accept.
template <class Cap>
bool otr_verify_token(const OtrPublicKey<Cap> &pk, OtrToken &token, Rng &rng) {
    if (token.components.size() != pk.r()) {
        return false;
    }
    bool ok = true;
    for (std::size_t i = 0; i < pk.r(); i++) {
        auto &c = token.components[i];
        if (c.key_id != pk.components[i].key_id()) {
            ok = false;
            continue;
        }
        ok = pk.components[i].verify_state(c.state, rng) && ok;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// OT: hash-and-sign over OTR with r = hash output bits.

struct OtSecretKey {
    unsigned kappa = 0;
    Bytes s;
    OtrSecretKey otr;
    std::size_t r() const {
        return otr.r();
    }
    std::size_t n() const;
};

template <class Cap>
struct OtPublicKey {
    unsigned kappa = 0;
    Bytes s;
    OtrPublicKey<Cap> otr;
    std::size_t r() const {
        return otr.r();
    }
};

template <class Cap>
struct OtKeyPair {
    OtPublicKey<Cap> pk;
    OtSecretKey sk;
};

struct OtToken {
    Bytes s;
    OtrToken otr;
};

/// h_s(document) truncated to r bits.
std::vector<bool> ot_digest(ByteView s, std::size_t r, ByteView document);

OtSecretKey ot_secret_keygen(unsigned kappa, std::size_t hash_bits, Rng &rng,
                             std::optional<std::size_t> n = std::nullopt);

template <class Cap>
OtPublicKey<Cap> ot_public_key(const OtSecretKey &sk) {
    return OtPublicKey<Cap>{sk.kappa, sk.s, otr_public_key<Cap>(sk.otr)};
}

OtKeyPair<OracleCapability> ot_keygen(unsigned kappa, std::size_t hash_bits, Rng &rng,
                                      std::optional<std::size_t> n = std::nullopt);
OtToken ot_token_gen(const OtSecretKey &sk);
std::optional<OtrSignature> ot_sign(ByteView document, OtToken &token, Rng &rng);

template <class Cap>
bool ot_verify(const OtPublicKey<Cap> &pk, ByteView document, const OtrSignature &sig) {
    return otr_verify(pk.otr, ot_digest(pk.s, pk.r(), document), sig);
}

template <class Cap>
bool ot_verify_token(const OtPublicKey<Cap> &pk, OtToken &token, Rng &rng) {
    if (token.s != pk.s) {
        return false;
    }
    return otr_verify_token(pk.otr, token.otr, rng);
}

/// Uniformly random document of `bits` bits, packed MSB-first with the
/// unused low bits of the last byte cleared.
Bytes random_document(std::size_t bits, Rng &rng);

/// Signs a fresh random kappa-bit document with whatever state the token
/// holds and verifies the result. Consumes the token.
template <class Cap>
bool ot_revoke(const OtPublicKey<Cap> &pk, OtToken &token, Rng &rng) {
    const Bytes doc = random_document(pk.kappa, rng);
    auto sig = otr_sign_unchecked(ot_digest(pk.s, pk.r(), doc), token.otr, rng);
    return sig.has_value() && ot_verify(pk, doc, *sig);
}

/// Canonical binary form of an OT key: magic, SIMULATION-ONLY marker,
/// kappa, n, r, s, then per component its key id and the basis of A.
/// The public key of the simulated scheme IS this key, since the oracle
/// cannot be externalized without its subspace.
Bytes encode_ot_key(const OtSecretKey &sk);
/// Strict inverse of encode_ot_key; throws DecodeError.
OtSecretKey decode_ot_key(ByteView data);

/// n/2 x ceil(n/8) byte encoding helpers used by the codecs.
Bytes encode_vector(const F2Vector &v);
F2Vector decode_vector(ByteReader &reader, std::size_t n);

// ---------------------------------------------------------------------------
// TS: many tokens under one classical key via a signature chain.

struct TsParams {
    unsigned kappa = 16;
    std::size_t n = 0;
    std::size_t hash_bits = 256;
    prim::DsAlgorithm ds = prim::DsAlgorithm::ed25519;
    unsigned merkle_height = 5;

    /// n = ot1::default_dimension(kappa), 256-bit hash, Ed25519.
    static TsParams defaults(unsigned kappa);
    bool operator==(const TsParams &) const = default;
};

struct TsPublicKey {
    TsParams params;
    prim::DsPublicKey ds_pk;
    bool operator==(const TsPublicKey &) const = default;
};

struct TsSecretKey {
    TsParams params;
    prim::DsSecretKey ds_sk;
};

struct TsKeyPair {
    TsPublicKey pk;
    TsSecretKey sk;
};

struct TsToken {
    Bytes ot_pk;
    Bytes chain_sig;
    OtToken ot_token;
    bool spent() const {
        return ot_token.otr.spent();
    }
};

struct TsSignature {
    Bytes ot_pk;
    Bytes chain_sig;
    OtrSignature ot_sig;
    bool operator==(const TsSignature &) const = default;
};

TsKeyPair ts_keygen(const TsParams &params, Rng &rng);
/// Fresh OT keypair per token; the TS key signs the encoded OT key.
TsToken ts_token_gen(TsSecretKey &sk, Rng &rng);
std::optional<TsSignature> ts_sign(ByteView document, TsToken &token, Rng &rng);
/// Chain first, then the inner OT signature.
bool ts_verify(const TsPublicKey &pk, ByteView document, const TsSignature &sig);
bool ts_verify_token(const TsPublicKey &pk, TsToken &token, Rng &rng);
/// Random kappa-bit document, signed and verified; consumes the token.
bool ts_revoke(const TsPublicKey &pk, TsToken &token, Rng &rng);

/// Chain check plus decoding; nullopt if the chain signature fails or the
/// key does not match the scheme parameters.
std::optional<OtSecretKey> ts_open_chain(const TsPublicKey &pk, ByteView ot_pk, ByteView chain_sig);

// ---------------------------------------------------------------------------
// Multi-signature predicates.

/// k distinct documents, every pair verifying.
template <class Doc, class Sig, class Verify>
bool verify_k(const std::vector<std::pair<Doc, Sig>> &pairs, Verify &&verify) {
    if (pairs.empty()) {
        return false;
    }
    for (std::size_t i = 0; i < pairs.size(); i++) {
        for (std::size_t j = i + 1; j < pairs.size(); j++) {
            if (pairs[i].first == pairs[j].first) {
                return false;
            }
        }
    }
    for (const auto &[doc, sig] : pairs) {
        if (!verify(doc, sig)) {
            return false;
        }
    }
    return true;
}

/// k distinct (document, signature) pairs, every pair verifying.
template <class Doc, class Sig, class Verify>
bool verify_prime_k(const std::vector<std::pair<Doc, Sig>> &pairs, Verify &&verify) {
    if (pairs.empty()) {
        return false;
    }
    for (std::size_t i = 0; i < pairs.size(); i++) {
        for (std::size_t j = i + 1; j < pairs.size(); j++) {
            if (pairs[i] == pairs[j]) {
                return false;
            }
        }
    }
    for (const auto &[doc, sig] : pairs) {
        if (!verify(doc, sig)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Digital signatures from TS.

/// Memory-dependent signature: mints a fresh token and signs with it.
std::optional<TsSignature> mds_sign(TsSecretKey &sk, ByteView document, Rng &rng);

/// mds_sign with a document -> signature table, so repeated documents get
/// the same signature. Not synchronized.
class MemoizedSigner {
   public:
    explicit MemoizedSigner(TsSecretKey sk) : sk_(std::move(sk)) {
    }
    std::optional<TsSignature> sign(ByteView document, Rng &rng);
    std::size_t size() const {
        return table_.size();
    }

   private:
    TsSecretKey sk_;
    std::map<Bytes, TsSignature> table_;
};

}  // namespace qtsl::stack

#endif
