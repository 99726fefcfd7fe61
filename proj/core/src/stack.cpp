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

#include "qtsl/stack.hpp"

#include <algorithm>
#include <string>
#include <string_view>

namespace qtsl::stack {

namespace {

constexpr std::string_view kOtKeyMagic = "QTSLOTK1";
constexpr std::string_view kSimulationMarker = "SIMULATION-ONLY";

ByteView view(std::string_view s) {
    return ByteView(reinterpret_cast<const std::uint8_t *>(s.data()), s.size());
}

}  // namespace

bool OtrToken::spent() const {
    return std::any_of(components.begin(), components.end(),
                       [](const ot1::Ot1Token &c) { return c.lifecycle == ot1::Lifecycle::Spent; });
}

OtrSecretKey otr_secret_keygen(unsigned kappa, std::size_t r, Rng &rng, std::optional<std::size_t> n) {
    if (r == 0) {
        throw std::invalid_argument("otr_keygen: r must be >= 1");
    }
    OtrSecretKey sk;
    sk.components.reserve(r);
    for (std::size_t i = 0; i < r; i++) {
        sk.components.push_back(ot1::ot1_keygen(kappa, rng, n).sk);
    }
    return sk;
}

OtrKeyPair<OracleCapability> otr_keygen(unsigned kappa, std::size_t r, Rng &rng, std::optional<std::size_t> n) {
    auto sk = otr_secret_keygen(kappa, r, rng, n);
    auto pk = otr_public_key<OracleCapability>(sk);
    return {std::move(pk), std::move(sk)};
}

OtrToken otr_token_gen(const OtrSecretKey &sk) {
    OtrToken token;
    token.components.reserve(sk.r());
    for (const auto &c : sk.components) {
        token.components.push_back(ot1::ot1_token_gen(c));
    }
    return token;
}

std::optional<OtrSignature> otr_sign_unchecked(const std::vector<bool> &alpha, OtrToken &token, Rng &rng) {
    if (alpha.size() != token.components.size()) {
        throw std::invalid_argument("otr_sign: document length " + std::to_string(alpha.size()) +
                                    " does not match r = " + std::to_string(token.components.size()));
    }
    OtrSignature sig;
    sig.alpha = alpha;
    sig.sigs.reserve(alpha.size());
    bool failed = false;
    for (std::size_t i = 0; i < alpha.size(); i++) {
        auto &c = token.components[i];
        c.lifecycle = ot1::Lifecycle::Spent;
        auto outcome = ot1::sign_register(alpha[i], c.state, rng);
        if (!outcome || outcome->is_zero()) {
            failed = true;
            sig.sigs.emplace_back(c.state.ambient_n());
        } else {
            sig.sigs.push_back(std::move(*outcome));
        }
    }
    if (failed) {
        return std::nullopt;
    }
    return sig;
}

std::optional<OtrSignature> otr_sign(const std::vector<bool> &alpha, OtrToken &token, Rng &rng) {
    if (token.spent()) {
        throw ot1::TokenSpent();
    }
    return otr_sign_unchecked(alpha, token, rng);
}

std::size_t OtSecretKey::n() const {
    return otr.components.empty() ? 0 : otr.components.front().space.ambient_dim();
}

std::vector<bool> ot_digest(ByteView s, std::size_t r, ByteView document) {
    return prim::HashScheme(r).eval(s, document);
}

OtSecretKey ot_secret_keygen(unsigned kappa, std::size_t hash_bits, Rng &rng, std::optional<std::size_t> n) {
    OtSecretKey sk;
    sk.kappa = kappa;
    sk.s = prim::HashScheme(hash_bits).index(kappa, rng);
    sk.otr = otr_secret_keygen(kappa, hash_bits, rng, n);
    return sk;
}

OtKeyPair<OracleCapability> ot_keygen(unsigned kappa, std::size_t hash_bits, Rng &rng, std::optional<std::size_t> n) {
    auto sk = ot_secret_keygen(kappa, hash_bits, rng, n);
    auto pk = ot_public_key<OracleCapability>(sk);
    return {std::move(pk), std::move(sk)};
}

OtToken ot_token_gen(const OtSecretKey &sk) {
    return OtToken{sk.s, otr_token_gen(sk.otr)};
}

std::optional<OtrSignature> ot_sign(ByteView document, OtToken &token, Rng &rng) {
    return otr_sign(ot_digest(token.s, token.otr.components.size(), document), token.otr, rng);
}

Bytes random_document(std::size_t bits, Rng &rng) {
    Bytes doc = rng.bytes((bits + 7) / 8);
    if (bits % 8 != 0) {
        doc.back() &= static_cast<std::uint8_t>(0xFF00 >> (bits % 8));
    }
    return doc;
}

Bytes encode_vector(const F2Vector &v) {
    Bytes out((v.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < v.size(); i++) {
        if (v.get(i)) {
            out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
        }
    }
    return out;
}

F2Vector decode_vector(ByteReader &reader, std::size_t n) {
    auto raw = reader.raw((n + 7) / 8);
    F2Vector v(n);
    for (std::size_t i = 0; i < raw.size() * 8; i++) {
        const bool bit = (raw[i / 8] >> (7 - i % 8)) & 1;
        if (i >= n) {
            if (bit) {
                throw DecodeError("nonzero padding bit in vector encoding");
            }
        } else if (bit) {
            v.set(i, true);
        }
    }
    return v;
}

Bytes encode_ot_key(const OtSecretKey &sk) {
    ByteWriter w;
    w.raw(view(kOtKeyMagic));
    w.raw(view(kSimulationMarker));
    w.u16(static_cast<std::uint16_t>(sk.kappa));
    w.u16(static_cast<std::uint16_t>(sk.n()));
    w.u16(static_cast<std::uint16_t>(sk.r()));
    w.blob(sk.s);
    for (const auto &c : sk.otr.components) {
        w.raw(c.key_id);
        for (const auto &row : c.space.basis()) {
            w.raw(encode_vector(row));
        }
    }
    return w.take();
}

OtSecretKey decode_ot_key(ByteView data) {
    try {
        ByteReader rd(data);
        auto magic = rd.raw(kOtKeyMagic.size());
        auto marker = rd.raw(kSimulationMarker.size());
        if (!std::equal(magic.begin(), magic.end(), kOtKeyMagic.begin()) ||
            !std::equal(marker.begin(), marker.end(), kSimulationMarker.begin())) {
            throw DecodeError("bad OT key header");
        }
        OtSecretKey sk;
        sk.kappa = rd.u16();
        const std::size_t n = rd.u16();
        const std::size_t r = rd.u16();
        auto s = rd.blob();
        sk.s.assign(s.begin(), s.end());
        if (n < 2 || n % 2 != 0 || r == 0 || r > 256 || sk.kappa == 0) {
            throw DecodeError("OT key parameters out of range");
        }
        if (prim::HashScheme::kappa_of(sk.s) != sk.kappa) {
            throw DecodeError("hash index does not match kappa");
        }
        sk.otr.components.reserve(r);
        for (std::size_t i = 0; i < r; i++) {
            ot1::Ot1SecretKey c;
            auto id = rd.raw(c.key_id.size());
            std::copy(id.begin(), id.end(), c.key_id.begin());
            std::vector<F2Vector> rows;
            rows.reserve(n / 2);
            for (std::size_t j = 0; j < n / 2; j++) {
                rows.push_back(decode_vector(rd, n));
            }
            c.space = f2::canonicalize(rows, n);
            if (c.space.basis() != rows) {
                throw DecodeError("OT key basis is not in canonical form");
            }
            sk.otr.components.push_back(std::move(c));
        }
        if (!rd.done()) {
            throw DecodeError("trailing bytes after OT key");
        }
        return sk;
    } catch (const std::out_of_range &) {
        throw DecodeError("truncated OT key");
    } catch (const std::invalid_argument &e) {
        throw DecodeError(e.what());
    }
}

TsParams TsParams::defaults(unsigned kappa) {
    TsParams p;
    p.kappa = kappa;
    p.n = ot1::default_dimension(kappa);
    return p;
}

TsKeyPair ts_keygen(const TsParams &params, Rng &rng) {
    if (params.n < 2 || params.n % 2 != 0) {
        throw std::invalid_argument("ts_keygen: n must be even and >= 2");
    }
    if (params.hash_bits == 0 || params.hash_bits > 256) {
        throw std::invalid_argument("ts_keygen: hash_bits must be in [1, 256]");
    }
    auto ds = prim::ds_keygen(params.ds, rng, params.merkle_height);
    return TsKeyPair{TsPublicKey{params, std::move(ds.pk)}, TsSecretKey{params, std::move(ds.sk)}};
}

TsToken ts_token_gen(TsSecretKey &sk, Rng &rng) {
    auto ot = ot_secret_keygen(sk.params.kappa, sk.params.hash_bits, rng, sk.params.n);
    TsToken token;
    token.ot_pk = encode_ot_key(ot);
    token.chain_sig = prim::ds_sign(sk.ds_sk, token.ot_pk);
    token.ot_token = ot_token_gen(ot);
    return token;
}

std::optional<TsSignature> ts_sign(ByteView document, TsToken &token, Rng &rng) {
    auto sig = ot_sign(document, token.ot_token, rng);
    if (!sig) {
        return std::nullopt;
    }
    return TsSignature{token.ot_pk, token.chain_sig, std::move(*sig)};
}

std::optional<OtSecretKey> ts_open_chain(const TsPublicKey &pk, ByteView ot_pk, ByteView chain_sig) {
    if (!prim::ds_verify(pk.ds_pk, ot_pk, chain_sig)) {
        return std::nullopt;
    }
    OtSecretKey ot;
    try {
        ot = decode_ot_key(ot_pk);
    } catch (const DecodeError &) {
        return std::nullopt;
    }
    if (ot.kappa != pk.params.kappa || ot.n() != pk.params.n || ot.r() != pk.params.hash_bits) {
        return std::nullopt;
    }
    return ot;
}

bool ts_verify(const TsPublicKey &pk, ByteView document, const TsSignature &sig) {
    auto ot = ts_open_chain(pk, sig.ot_pk, sig.chain_sig);
    if (!ot) {
        return false;
    }
    return ot_verify(ot_public_key<OracleCapability>(*ot), document, sig.ot_sig);
}

bool ts_verify_token(const TsPublicKey &pk, TsToken &token, Rng &rng) {
    auto ot = ts_open_chain(pk, token.ot_pk, token.chain_sig);
    if (!ot) {
        return false;
    }
    return ot_verify_token(ot_public_key<OracleCapability>(*ot), token.ot_token, rng);
}

bool ts_revoke(const TsPublicKey &pk, TsToken &token, Rng &rng) {
    const Bytes doc = random_document(pk.params.kappa, rng);
    const auto &ot_token = token.ot_token;
    auto sig = otr_sign_unchecked(ot_digest(ot_token.s, ot_token.otr.components.size(), doc), token.ot_token.otr, rng);
    if (!sig) {
        return false;
    }
    return ts_verify(pk, doc, TsSignature{token.ot_pk, token.chain_sig, std::move(*sig)});
}

std::optional<TsSignature> mds_sign(TsSecretKey &sk, ByteView document, Rng &rng) {
    auto token = ts_token_gen(sk, rng);
    return ts_sign(document, token, rng);
}

std::optional<TsSignature> MemoizedSigner::sign(ByteView document, Rng &rng) {
    Bytes key(document.begin(), document.end());
    if (auto it = table_.find(key); it != table_.end()) {
        return it->second;
    }
    auto sig = mds_sign(sk_, document, rng);
    if (sig) {
        table_.emplace(std::move(key), *sig);
    }
    return sig;
}

}  // namespace qtsl::stack
