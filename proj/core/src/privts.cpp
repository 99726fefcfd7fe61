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

#include "qtsl/privts.hpp"

#include "qtsl/primitives.hpp"

namespace qtsl::privts {

bool PrivOt1Key::verify(bool alpha, const F2Vector &sig) const {
    return priv_verify(*this, alpha, sig);
}

bool PrivOt1Key::verify_state(qsim::CosetState &state, Rng &rng) const {
    if (state.is_unsupported() || state.ambient_n() != space.ambient_dim()) {
        state = qsim::CosetState::unsupported(space.ambient_dim());
        return false;
    }
    auto result = qsim::project_subspace(state, space, rng);
    state = std::move(result.post);
    return result.accepted;
}

PrivOt1Key priv_ot1_keygen(unsigned kappa, Rng &rng, std::optional<std::size_t> n) {
    return PrivOt1Key::from_secret(ot1::ot1_keygen(kappa, rng, n).sk);
}

ot1::Ot1Token priv_token_gen(const PrivOt1Key &k) {
    return ot1::ot1_token_gen(ot1::Ot1SecretKey{k.space, k.id});
}

std::optional<ot1::Ot1Signature> priv_sign(bool alpha, ot1::Ot1Token &token, Rng &rng) {
    return ot1::ot1_sign(alpha, token, rng);
}

bool priv_verify(const PrivOt1Key &k, bool alpha, const F2Vector &sig) {
    if (sig.size() != k.space.ambient_dim() || sig.is_zero()) {
        return false;
    }
    return f2::chi_star(k.space, sig, alpha);
}

bool priv_verify_token(const PrivOt1Key &k, ot1::Ot1Token &token, Rng &rng) {
    return token.key_id == k.id && k.verify_state(token.state, rng);
}

bool priv_revoke(const PrivOt1Key &k, ot1::Ot1Token &token, Rng &rng) {
    const bool alpha = rng.next_bit();
    token.lifecycle = ot1::Lifecycle::Spent;
    auto outcome = ot1::sign_register(alpha, token.state, rng);
    return outcome.has_value() && priv_verify(k, alpha, *outcome);
}

TmParams TmParams::defaults(unsigned kappa) {
    TmParams p;
    p.kappa = kappa;
    p.n = ot1::default_dimension(kappa);
    return p;
}

TmKey tm_keygen(const TmParams &params, Rng &rng) {
    if (params.n < 2 || params.n % 2 != 0) {
        throw std::invalid_argument("tm_keygen: n must be even and >= 2");
    }
    if (params.hash_bits == 0 || params.hash_bits > 256) {
        throw std::invalid_argument("tm_keygen: hash_bits must be in [1, 256]");
    }
    TmKey key;
    key.params = params;
    key.mac_key = prim::mac_keygen(rng);
    key.enc_key = prim::enc_keygen(rng);
    return key;
}

TmToken tm_token_gen(const TmKey &key, Rng &rng) {
    auto inner = stack::ot_secret_keygen(key.params.kappa, key.params.hash_bits, rng, key.params.n);
    TmToken token;
    token.enc_key_blob = prim::encrypt(key.enc_key, stack::encode_ot_key(inner), rng);
    token.tag = prim::mac_sign(key.mac_key, token.enc_key_blob);
    token.inner = stack::ot_token_gen(inner);
    return token;
}

std::optional<TmSignature> tm_sign(ByteView document, TmToken &token, Rng &rng) {
    auto sig = stack::ot_sign(document, token.inner, rng);
    if (!sig) {
        return std::nullopt;
    }
    return TmSignature{token.enc_key_blob, token.tag, std::move(*sig)};
}

namespace {

void note(TmTrace *trace, TmStep step) {
    if (trace != nullptr) {
        trace->push_back(step);
    }
}

std::optional<PrivOtKey> open_blob(const TmKey &key, ByteView blob, ByteView tag, TmTrace *trace) {
    note(trace, TmStep::CheckTag);
    if (!prim::mac_verify(key.mac_key, blob, tag)) {
        return std::nullopt;
    }
    note(trace, TmStep::Decrypt);
    auto plain = prim::decrypt(key.enc_key, blob);
    if (!plain) {
        return std::nullopt;
    }
    stack::OtSecretKey inner;
    try {
        inner = stack::decode_ot_key(*plain);
    } catch (const DecodeError &) {
        return std::nullopt;
    }
    if (inner.kappa != key.params.kappa || inner.n() != key.params.n || inner.r() != key.params.hash_bits) {
        return std::nullopt;
    }
    return priv_ot_key(inner);
}

}  // namespace

bool tm_verify(const TmKey &key, ByteView document, const TmSignature &sig, TmTrace *trace) {
    auto inner = open_blob(key, sig.enc_key_blob, sig.tag, trace);
    if (!inner) {
        return false;
    }
    note(trace, TmStep::VerifyInner);
    return stack::ot_verify(*inner, document, sig.inner);
}

bool tm_verify_token(const TmKey &key, TmToken &token, Rng &rng, TmTrace *trace) {
    auto inner = open_blob(key, token.enc_key_blob, token.tag, trace);
    if (!inner) {
        return false;
    }
    note(trace, TmStep::VerifyInner);
    return stack::ot_verify_token(*inner, token.inner, rng);
}

bool tm_revoke(const TmKey &key, TmToken &token, Rng &rng) {
    const Bytes doc = stack::random_document(key.params.kappa, rng);
    auto digest = stack::ot_digest(token.inner.s, token.inner.otr.components.size(), doc);
    auto sig = stack::otr_sign_unchecked(digest, token.inner.otr, rng);
    if (!sig) {
        return false;
    }
    return tm_verify(key, doc, TmSignature{token.enc_key_blob, token.tag, std::move(*sig)});
}

}  // namespace qtsl::privts
