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

#include "qtsl/ot1.hpp"

#include <cmath>
#include <string>

namespace qtsl::ot1 {

namespace simulation {
const Subspace &hidden_subspace(const MembershipOracle &oracle) {
    return oracle.hidden_;
}
}  // namespace simulation

MembershipOracle::MembershipOracle(Subspace hidden, KeyId key_id) : hidden_(std::move(hidden)), key_id_(key_id) {
    if (hidden_.dim() * 2 != hidden_.ambient_dim()) {
        throw std::invalid_argument("oracle subspace must have dimension n/2");
    }
}

bool MembershipOracle::query(const F2Vector &v, bool p) const {
    if (mode() == OracleMode::Withheld) {
        throw OracleWithheld();
    }
    count_.fetch_add(1);
    return f2::chi_star(hidden_, v, p);
}

std::size_t default_dimension(unsigned kappa) {
    const double l = std::log2(static_cast<double>(kappa) + 2.0);
    return 2 * static_cast<std::size_t>(std::ceil(std::pow(l, 1.5)));
}

KeyId random_key_id(Rng &rng) {
    KeyId id{};
    auto b = rng.bytes(id.size());
    std::copy(b.begin(), b.end(), id.begin());
    return id;
}

Ot1KeyPair ot1_keygen(unsigned kappa, Rng &rng, std::optional<std::size_t> n_override) {
    if (kappa == 0) {
        throw std::invalid_argument("kappa must be >= 1");
    }
    const std::size_t n = n_override.value_or(default_dimension(kappa));
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("ot1_keygen: n must be even and >= 2, got " + std::to_string(n));
    }
    auto space = f2::sample_subspace(n, rng);
    auto id = random_key_id(rng);
    auto pk = std::make_shared<MembershipOracle>(space, id);
    return Ot1KeyPair{std::move(pk), Ot1SecretKey{std::move(space), id}};
}

Ot1Token ot1_token_gen(const Ot1SecretKey &sk) {
    return Ot1Token{qsim::prepare_subspace_state(sk.space), sk.key_id, Lifecycle::Fresh};
}

std::optional<F2Vector> sign_register(bool alpha, qsim::CosetState &state, Rng &rng) {
    if (state.is_unsupported()) {
        return std::nullopt;
    }
    if (alpha) {
        state = qsim::hadamard_all(state);
    }
    auto m = qsim::measure_standard(state, rng);
    // A Hadamard-basis measurement leaves H|b>, not |b>.
    state = alpha ? qsim::hadamard_all(m.post) : std::move(m.post);
    return std::move(m.outcome);
}

std::optional<Ot1Signature> ot1_sign(bool alpha, Ot1Token &token, Rng &rng) {
    if (token.lifecycle == Lifecycle::Spent) {
        throw TokenSpent();
    }
    token.lifecycle = Lifecycle::Spent;
    auto outcome = sign_register(alpha, token.state, rng);
    if (!outcome || outcome->is_zero()) {
        return std::nullopt;
    }
    return Ot1Signature{alpha, std::move(*outcome), token.key_id};
}

bool ot1_verify(const MembershipOracle &pk, bool alpha, const F2Vector &sig) {
    if (sig.size() != pk.hidden_.ambient_dim()) {
        return false;
    }
    const bool in_space = pk.query(sig, alpha);
    return in_space && !sig.is_zero();
}

bool ot1_verify(const MembershipOracle &pk, const Ot1Signature &sig) {
    return sig.key_id == pk.key_id() && ot1_verify(pk, sig.alpha, sig.sig);
}

bool verify_state(const MembershipOracle &pk, qsim::CosetState &state, Rng &rng) {
    if (pk.mode() == OracleMode::Withheld) {
        throw OracleWithheld();
    }
    // P_A followed by H^n P_{A^perp} H^n: one query for each projection.
    pk.count_.fetch_add(2);
    if (state.is_unsupported() || state.ambient_n() != pk.hidden_.ambient_dim()) {
        state = qsim::CosetState::unsupported(pk.hidden_.ambient_dim());
        return false;
    }
    auto result = qsim::project_subspace(state, pk.hidden_, rng);
    state = std::move(result.post);
    return result.accepted;
}

bool ot1_verify_token(const MembershipOracle &pk, Ot1Token &token, Rng &rng) {
    return verify_state(pk, token.state, rng);
}

bool ot1_revoke(const MembershipOracle &pk, Ot1Token &token, Rng &rng) {
    const bool alpha = rng.next_bit();
    token.lifecycle = Lifecycle::Spent;
    auto outcome = sign_register(alpha, token.state, rng);
    if (!outcome) {
        return false;
    }
    return ot1_verify(pk, alpha, *outcome);
}

}  // namespace qtsl::ot1
