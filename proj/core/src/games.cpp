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

#include "qtsl/games.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "json.hpp"

namespace qtsl::games {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double binomial_sigma(double p, std::uint64_t trials) {
    return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

LinearFit log2_linear_fit(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("log2_linear_fit needs at least two points of equal count");
    }
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < x.size(); i++) {
        if (!(y[i] > 0)) {
            throw std::invalid_argument("log2_linear_fit: y values must be positive");
        }
        ly[i] = std::log2(y[i]);
        sx += x[i];
        sy += ly[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

void GameReport::finish() {
    rate = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    wilson95 = wilson_interval(successes, trials);
}

std::string GameReport::to_json_line() const {
    nlohmann::json j;
    j["game"] = game;
    j["scheme"] = scheme;
    j["strategy"] = strategy;
    j["params"] = params;
    j["successes"] = successes;
    j["trials"] = trials;
    j["rate"] = rate;
    j["wilson95"] = {wilson95.lo, wilson95.hi};
    if (analytic) {
        j["analytic"] = {{"value", *analytic}, {"formula", analytic_formula}};
    } else {
        j["analytic"] = nullptr;
    }
    j["extras"] = extras;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Adapters.

std::optional<std::any> GameScheme::sign_unchecked(const Document &doc, std::any &token, Rng &rng) {
    auto regs = registers(token);
    const auto bits = digest(token, doc);
    if (bits.size() != regs.size()) {
        throw std::invalid_argument("digest length does not match the register count");
    }
    std::vector<F2Vector> outcomes;
    outcomes.reserve(regs.size());
    bool failed = false;
    for (std::size_t i = 0; i < regs.size(); i++) {
        regs[i]->lifecycle = ot1::Lifecycle::Spent;
        auto out = ot1::sign_register(bits[i], regs[i]->state, rng);
        if (!out || out->is_zero()) {
            failed = true;
            outcomes.emplace_back(regs[i]->state.ambient_n());
        } else {
            outcomes.push_back(std::move(*out));
        }
    }
    if (failed) {
        return std::nullopt;
    }
    return assemble(doc, token, std::move(outcomes));
}

namespace {

using stack::OracleCapability;
using privts::PrivOt1Key;

template <class T>
T &cast(std::any &a) {
    return std::any_cast<T &>(a);
}

template <class T>
const T &cast(const std::any &a) {
    return std::any_cast<const T &>(a);
}

std::optional<bool> doc_bit(const Document &doc) {
    if (doc.size() != 1 || doc[0] > 1) {
        return std::nullopt;
    }
    return doc[0] == 1;
}

std::vector<bool> unpack_bits(const Document &doc, std::size_t r) {
    if (doc.size() != (r + 7) / 8) {
        throw std::invalid_argument("document must be exactly " + std::to_string(r) + " bits");
    }
    std::vector<bool> bits(r);
    for (std::size_t i = 0; i < r; i++) {
        bits[i] = (doc[i / 8] >> (7 - i % 8)) & 1;
    }
    return bits;
}

template <class Cap>
bool cap_query(const Cap &cap, const F2Vector &v, bool p) {
    if constexpr (std::is_same_v<Cap, OracleCapability>) {
        return cap.oracle->query(v, p);
    } else {
        (void)cap;
        (void)v;
        (void)p;
        throw CapabilityViolation("private layers expose no membership oracle");
    }
}

template <class Cap>
void cap_mode(const Cap &cap, ot1::OracleMode mode) {
    if constexpr (std::is_same_v<Cap, OracleCapability>) {
        cap.oracle->set_mode(mode);
    } else {
        (void)cap;
        (void)mode;
    }
}

constexpr bool kOracle = true;

template <class Cap>
class Ot1Adapter : public GameScheme {
   public:
    Ot1Adapter(std::size_t n, unsigned kappa, std::string layer) : n_(n), kappa_(kappa), layer_(std::move(layer)) {
    }
    SchemeInfo info() const override {
        return {layer_, n_, 1, kappa_, std::is_same_v<Cap, OracleCapability>};
    }
    void keygen(Rng &rng) override {
        sk_ = ot1::ot1_keygen(kappa_, rng, n_).sk;
        cap_ = Cap::from_secret(*sk_);
        cap_mode(*cap_, mode_);
    }
    std::any mint(Rng &) override {
        return ot1::ot1_token_gen(*sk_);
    }
    std::optional<std::any> sign(const Document &doc, std::any &token, Rng &rng) override {
        auto bit = doc_bit(doc);
        if (!bit) {
            throw std::invalid_argument("one-bit documents are {0} or {1}");
        }
        auto sig = ot1::ot1_sign(*bit, cast<ot1::Ot1Token>(token), rng);
        if (!sig) {
            return std::nullopt;
        }
        return std::any(std::move(*sig));
    }
    bool verify(const Document &doc, const std::any &sig) override {
        auto bit = doc_bit(doc);
        const auto *s = std::any_cast<ot1::Ot1Signature>(&sig);
        if (!bit || s == nullptr || s->alpha != *bit || s->key_id != cap_->key_id()) {
            return false;
        }
        return cap_->verify(s->alpha, s->sig);
    }
    bool verify_token(std::any &token, Rng &rng) override {
        auto &t = cast<ot1::Ot1Token>(token);
        return t.key_id == cap_->key_id() && cap_->verify_state(t.state, rng);
    }
    bool revoke(std::any &token, Rng &rng) override {
        auto &t = cast<ot1::Ot1Token>(token);
        const bool alpha = rng.next_bit();
        t.lifecycle = ot1::Lifecycle::Spent;
        auto out = ot1::sign_register(alpha, t.state, rng);
        return out.has_value() && t.key_id == cap_->key_id() && cap_->verify(alpha, *out);
    }
    bool same_signature(const std::any &a, const std::any &b) const override {
        return cast<ot1::Ot1Signature>(a) == cast<ot1::Ot1Signature>(b);
    }
    Document random_document(Rng &rng) const override {
        return Document{static_cast<std::uint8_t>(rng.next_bit())};
    }
    std::vector<ot1::Ot1Token *> registers(std::any &token) override {
        return {&cast<ot1::Ot1Token>(token)};
    }
    std::vector<bool> digest(const std::any &, const Document &doc) const override {
        auto bit = doc_bit(doc);
        if (!bit) {
            throw std::invalid_argument("one-bit documents are {0} or {1}");
        }
        return {*bit};
    }
    std::any assemble(const Document &doc, const std::any &token, std::vector<F2Vector> outcomes) const override {
        return ot1::Ot1Signature{*doc_bit(doc), std::move(outcomes.at(0)), cast<ot1::Ot1Token>(token).key_id};
    }
    bool query(std::size_t component, const F2Vector &v, bool p) override {
        if (component != 0) {
            throw std::out_of_range("one-bit scheme has a single register");
        }
        return cap_query(*cap_, v, p);
    }
    void set_oracle_mode(ot1::OracleMode mode) override {
        mode_ = mode;
        if (cap_) {
            cap_mode(*cap_, mode);
        }
    }

   private:
    std::size_t n_;
    unsigned kappa_;
    std::string layer_;
    std::optional<ot1::Ot1SecretKey> sk_;
    std::optional<Cap> cap_;
    ot1::OracleMode mode_ = ot1::OracleMode::Public;
};

class OtrAdapter : public GameScheme {
   public:
    OtrAdapter(std::size_t n, std::size_t r, unsigned kappa) : n_(n), r_(r), kappa_(kappa) {
    }
    SchemeInfo info() const override {
        return {"otr", n_, r_, kappa_, kOracle};
    }
    void keygen(Rng &rng) override {
        keys_ = stack::otr_keygen(kappa_, r_, rng, n_);
        set_oracle_mode(mode_);
    }
    std::any mint(Rng &) override {
        return stack::otr_token_gen(keys_->sk);
    }
    std::optional<std::any> sign(const Document &doc, std::any &token, Rng &rng) override {
        auto sig = stack::otr_sign(unpack_bits(doc, r_), cast<stack::OtrToken>(token), rng);
        if (!sig) {
            return std::nullopt;
        }
        return std::any(std::move(*sig));
    }
    bool verify(const Document &doc, const std::any &sig) override {
        const auto *s = std::any_cast<stack::OtrSignature>(&sig);
        if (s == nullptr || doc.size() != (r_ + 7) / 8) {
            return false;
        }
        return stack::otr_verify(keys_->pk, unpack_bits(doc, r_), *s);
    }
    bool verify_token(std::any &token, Rng &rng) override {
        return stack::otr_verify_token(keys_->pk, cast<stack::OtrToken>(token), rng);
    }
    bool revoke(std::any &token, Rng &rng) override {
        auto doc = random_document(rng);
        auto sig = stack::otr_sign_unchecked(unpack_bits(doc, r_), cast<stack::OtrToken>(token), rng);
        return sig.has_value() && verify(doc, std::any(*sig));
    }
    bool same_signature(const std::any &a, const std::any &b) const override {
        return cast<stack::OtrSignature>(a) == cast<stack::OtrSignature>(b);
    }
    Document random_document(Rng &rng) const override {
        return stack::random_document(r_, rng);
    }
    std::vector<ot1::Ot1Token *> registers(std::any &token) override {
        std::vector<ot1::Ot1Token *> out;
        for (auto &c : cast<stack::OtrToken>(token).components) {
            out.push_back(&c);
        }
        return out;
    }
    std::vector<bool> digest(const std::any &, const Document &doc) const override {
        return unpack_bits(doc, r_);
    }
    std::any assemble(const Document &doc, const std::any &, std::vector<F2Vector> outcomes) const override {
        return stack::OtrSignature{unpack_bits(doc, r_), std::move(outcomes)};
    }
    bool query(std::size_t component, const F2Vector &v, bool p) override {
        return keys_->pk.components.at(component).oracle->query(v, p);
    }
    void set_oracle_mode(ot1::OracleMode mode) override {
        mode_ = mode;
        if (keys_) {
            for (auto &c : keys_->pk.components) {
                c.oracle->set_mode(mode);
            }
        }
    }

   private:
    std::size_t n_;
    std::size_t r_;
    unsigned kappa_;
    std::optional<stack::OtrKeyPair<OracleCapability>> keys_;
    ot1::OracleMode mode_ = ot1::OracleMode::Public;
};

template <class Cap>
class OtAdapter : public GameScheme {
   public:
    OtAdapter(std::size_t n, std::size_t r, unsigned kappa, std::string layer)
        : n_(n), r_(r), kappa_(kappa), layer_(std::move(layer)) {
    }
    SchemeInfo info() const override {
        return {layer_, n_, r_, kappa_, std::is_same_v<Cap, OracleCapability>};
    }
    void keygen(Rng &rng) override {
        sk_ = stack::ot_secret_keygen(kappa_, r_, rng, n_);
        pk_ = stack::ot_public_key<Cap>(*sk_);
        set_oracle_mode(mode_);
    }
    std::any mint(Rng &) override {
        return stack::ot_token_gen(*sk_);
    }
    std::optional<std::any> sign(const Document &doc, std::any &token, Rng &rng) override {
        auto sig = stack::ot_sign(doc, cast<stack::OtToken>(token), rng);
        if (!sig) {
            return std::nullopt;
        }
        return std::any(std::move(*sig));
    }
    bool verify(const Document &doc, const std::any &sig) override {
        const auto *s = std::any_cast<stack::OtrSignature>(&sig);
        return s != nullptr && stack::ot_verify(*pk_, doc, *s);
    }
    bool verify_token(std::any &token, Rng &rng) override {
        return stack::ot_verify_token(*pk_, cast<stack::OtToken>(token), rng);
    }
    bool revoke(std::any &token, Rng &rng) override {
        return stack::ot_revoke(*pk_, cast<stack::OtToken>(token), rng);
    }
    bool same_signature(const std::any &a, const std::any &b) const override {
        return cast<stack::OtrSignature>(a) == cast<stack::OtrSignature>(b);
    }
    Document random_document(Rng &rng) const override {
        return stack::random_document(kappa_, rng);
    }
    std::vector<ot1::Ot1Token *> registers(std::any &token) override {
        std::vector<ot1::Ot1Token *> out;
        for (auto &c : cast<stack::OtToken>(token).otr.components) {
            out.push_back(&c);
        }
        return out;
    }
    std::vector<bool> digest(const std::any &token, const Document &doc) const override {
        return stack::ot_digest(cast<stack::OtToken>(token).s, r_, doc);
    }
    std::any assemble(const Document &doc, const std::any &token, std::vector<F2Vector> outcomes) const override {
        return stack::OtrSignature{digest(token, doc), std::move(outcomes)};
    }
    bool query(std::size_t component, const F2Vector &v, bool p) override {
        return cap_query(pk_->otr.components.at(component), v, p);
    }
    void set_oracle_mode(ot1::OracleMode mode) override {
        mode_ = mode;
        if (pk_) {
            for (auto &c : pk_->otr.components) {
                cap_mode(c, mode);
            }
        }
    }

   private:
    std::size_t n_;
    std::size_t r_;
    unsigned kappa_;
    std::string layer_;
    std::optional<stack::OtSecretKey> sk_;
    std::optional<stack::OtPublicKey<Cap>> pk_;
    ot1::OracleMode mode_ = ot1::OracleMode::Public;
};

class TsAdapter : public GameScheme {
   public:
    explicit TsAdapter(stack::TsParams params) : params_(params) {
    }
    SchemeInfo info() const override {
        return {"ts", params_.n, params_.hash_bits, params_.kappa, kOracle};
    }
    void keygen(Rng &rng) override {
        keys_ = stack::ts_keygen(params_, rng);
        issued_.reset();
        opened_.clear();
    }
    std::any mint(Rng &rng) override {
        auto token = stack::ts_token_gen(keys_->sk, rng);
        if (auto ot = stack::ts_open_chain(keys_->pk, token.ot_pk, token.chain_sig)) {
            issued_ = stack::ot_public_key<OracleCapability>(*ot);
            set_oracle_mode(mode_);
        }
        return token;
    }
    std::optional<std::any> sign(const Document &doc, std::any &token, Rng &rng) override {
        auto sig = stack::ts_sign(doc, cast<stack::TsToken>(token), rng);
        if (!sig) {
            return std::nullopt;
        }
        return std::any(std::move(*sig));
    }
    bool verify(const Document &doc, const std::any &sig) override {
        const auto *s = std::any_cast<stack::TsSignature>(&sig);
        return s != nullptr && stack::ts_verify(keys_->pk, doc, *s);
    }
    /// Same result as ts_verify_token; chains that were already opened
    /// under the current key are not re-verified.
    bool verify_token(std::any &token, Rng &rng) override {
        auto &t = cast<stack::TsToken>(token);
        Bytes id = t.ot_pk;
        id.insert(id.end(), t.chain_sig.begin(), t.chain_sig.end());
        auto it = opened_.find(id);
        if (it == opened_.end()) {
            std::optional<stack::OtPublicKey<OracleCapability>> pk;
            if (auto ot = stack::ts_open_chain(keys_->pk, t.ot_pk, t.chain_sig)) {
                pk = stack::ot_public_key<OracleCapability>(*ot);
            }
            it = opened_.emplace(std::move(id), std::move(pk)).first;
        }
        return it->second && stack::ot_verify_token(*it->second, t.ot_token, rng);
    }
    bool revoke(std::any &token, Rng &rng) override {
        return stack::ts_revoke(keys_->pk, cast<stack::TsToken>(token), rng);
    }
    bool same_signature(const std::any &a, const std::any &b) const override {
        return cast<stack::TsSignature>(a) == cast<stack::TsSignature>(b);
    }
    Document random_document(Rng &rng) const override {
        return stack::random_document(params_.kappa, rng);
    }
    std::vector<ot1::Ot1Token *> registers(std::any &token) override {
        std::vector<ot1::Ot1Token *> out;
        for (auto &c : cast<stack::TsToken>(token).ot_token.otr.components) {
            out.push_back(&c);
        }
        return out;
    }
    std::vector<bool> digest(const std::any &token, const Document &doc) const override {
        return stack::ot_digest(cast<stack::TsToken>(token).ot_token.s, params_.hash_bits, doc);
    }
    std::any assemble(const Document &doc, const std::any &token, std::vector<F2Vector> outcomes) const override {
        const auto &t = cast<stack::TsToken>(token);
        return stack::TsSignature{t.ot_pk, t.chain_sig, stack::OtrSignature{digest(token, doc), std::move(outcomes)}};
    }
    /// Queries the oracles of the most recently minted token.
    bool query(std::size_t component, const F2Vector &v, bool p) override {
        if (!issued_) {
            throw std::logic_error("no token minted yet");
        }
        return issued_->otr.components.at(component).oracle->query(v, p);
    }
    void set_oracle_mode(ot1::OracleMode mode) override {
        mode_ = mode;
        if (issued_) {
            for (auto &c : issued_->otr.components) {
                c.oracle->set_mode(mode);
            }
        }
    }

   private:
    stack::TsParams params_;
    std::optional<stack::TsKeyPair> keys_;
    std::optional<stack::OtPublicKey<OracleCapability>> issued_;
    std::map<Bytes, std::optional<stack::OtPublicKey<OracleCapability>>> opened_;
    ot1::OracleMode mode_ = ot1::OracleMode::Public;
};

class TmAdapter : public GameScheme {
   public:
    explicit TmAdapter(privts::TmParams params) : params_(params) {
    }
    SchemeInfo info() const override {
        return {"tm", params_.n, params_.hash_bits, params_.kappa, false};
    }
    void keygen(Rng &rng) override {
        key_ = privts::tm_keygen(params_, rng);
    }
    std::any mint(Rng &rng) override {
        return privts::tm_token_gen(*key_, rng);
    }
    std::optional<std::any> sign(const Document &doc, std::any &token, Rng &rng) override {
        auto sig = privts::tm_sign(doc, cast<privts::TmToken>(token), rng);
        if (!sig) {
            return std::nullopt;
        }
        return std::any(std::move(*sig));
    }
    bool verify(const Document &doc, const std::any &sig) override {
        const auto *s = std::any_cast<privts::TmSignature>(&sig);
        return s != nullptr && privts::tm_verify(*key_, doc, *s);
    }
    bool verify_token(std::any &token, Rng &rng) override {
        return privts::tm_verify_token(*key_, cast<privts::TmToken>(token), rng);
    }
    bool revoke(std::any &token, Rng &rng) override {
        return privts::tm_revoke(*key_, cast<privts::TmToken>(token), rng);
    }
    bool same_signature(const std::any &a, const std::any &b) const override {
        return cast<privts::TmSignature>(a) == cast<privts::TmSignature>(b);
    }
    Document random_document(Rng &rng) const override {
        return stack::random_document(params_.kappa, rng);
    }
    std::vector<ot1::Ot1Token *> registers(std::any &token) override {
        std::vector<ot1::Ot1Token *> out;
        for (auto &c : cast<privts::TmToken>(token).inner.otr.components) {
            out.push_back(&c);
        }
        return out;
    }
    std::vector<bool> digest(const std::any &token, const Document &doc) const override {
        return stack::ot_digest(cast<privts::TmToken>(token).inner.s, params_.hash_bits, doc);
    }
    std::any assemble(const Document &doc, const std::any &token, std::vector<F2Vector> outcomes) const override {
        const auto &t = cast<privts::TmToken>(token);
        return privts::TmSignature{t.enc_key_blob, t.tag, stack::OtrSignature{digest(token, doc), std::move(outcomes)}};
    }
    bool query(std::size_t, const F2Vector &, bool) override {
        throw CapabilityViolation("private layers expose no membership oracle");
    }
    void set_oracle_mode(ot1::OracleMode) override {
    }

   private:
    privts::TmParams params_;
    std::optional<privts::TmKey> key_;
};

}  // namespace

std::unique_ptr<GameScheme> make_ot1_scheme(std::size_t n, unsigned kappa) {
    return std::make_unique<Ot1Adapter<OracleCapability>>(n, kappa, "ot1");
}

std::unique_ptr<GameScheme> make_otr_scheme(std::size_t n, std::size_t r, unsigned kappa) {
    return std::make_unique<OtrAdapter>(n, r, kappa);
}

std::unique_ptr<GameScheme> make_ot_scheme(std::size_t n, std::size_t hash_bits, unsigned kappa) {
    return std::make_unique<OtAdapter<OracleCapability>>(n, hash_bits, kappa, "ot");
}

std::unique_ptr<GameScheme> make_ts_scheme(const stack::TsParams &params) {
    return std::make_unique<TsAdapter>(params);
}

std::unique_ptr<GameScheme> make_priv_ot1_scheme(std::size_t n, unsigned kappa) {
    return std::make_unique<Ot1Adapter<PrivOt1Key>>(n, kappa, "priv-ot1");
}

std::unique_ptr<GameScheme> make_priv_ot_scheme(std::size_t n, std::size_t hash_bits, unsigned kappa) {
    return std::make_unique<OtAdapter<PrivOt1Key>>(n, hash_bits, kappa, "priv-ot");
}

std::unique_ptr<GameScheme> make_tm_scheme(const privts::TmParams &params) {
    return std::make_unique<TmAdapter>(params);
}

std::unique_ptr<GameScheme> make_scheme(const std::string &layer, std::size_t n, std::size_t r, unsigned kappa) {
    if (layer == "ot1") {
        return make_ot1_scheme(n, kappa);
    }
    if (layer == "otr") {
        return make_otr_scheme(n, r, kappa);
    }
    if (layer == "ot") {
        return make_ot_scheme(n, r, kappa);
    }
    if (layer == "ts") {
        stack::TsParams p = stack::TsParams::defaults(kappa);
        p.n = n;
        p.hash_bits = r;
        return make_ts_scheme(p);
    }
    if (layer == "priv-ot1") {
        return make_priv_ot1_scheme(n, kappa);
    }
    if (layer == "priv-ot") {
        return make_priv_ot_scheme(n, r, kappa);
    }
    if (layer == "tm") {
        privts::TmParams p = privts::TmParams::defaults(kappa);
        p.n = n;
        p.hash_bits = r;
        return make_tm_scheme(p);
    }
    throw std::invalid_argument("unknown scheme layer '" + layer + "'");
}

// ---------------------------------------------------------------------------
// Adversary view and strategies.

bool AdversaryView::query(std::size_t component, const F2Vector &v, bool p) {
    if (!cap_.oracle_access) {
        throw CapabilityViolation("strategy declared no oracle access");
    }
    if (cap_.query_budget && queries_ >= *cap_.query_budget) {
        throw CapabilityViolation("query budget exhausted");
    }
    queries_++;
    return scheme_.query(component, v, p);
}

bool AdversaryView::verify(const Document &doc, const std::any &sig) {
    if (!cap_.oracle_access) {
        throw CapabilityViolation("verification needs the public key");
    }
    return scheme_.verify(doc, sig);
}

namespace {

/// `count` pairwise-distinct random documents.
std::vector<Document> distinct_documents(const GameScheme &scheme, std::size_t count, Rng &rng,
                                         const std::set<Document> &avoid = {}) {
    std::set<Document> seen = avoid;
    std::vector<Document> out;
    std::size_t attempts = 0;
    while (out.size() < count) {
        auto d = scheme.random_document(rng);
        if (seen.insert(d).second) {
            out.push_back(std::move(d));
        } else if (++attempts > 4096) {
            throw std::invalid_argument("document space too small for the requested number of documents");
        }
    }
    return out;
}

/// Honest signatures with tokens [first, first + count).
void sign_honestly(AdversaryView &view, Forgery &f, std::size_t first, std::size_t count,
                   const std::set<Document> &avoid = {}) {
    auto docs = distinct_documents(view.scheme(), count, view.rng(), avoid);
    for (std::size_t i = 0; i < count; i++) {
        if (auto sig = view.scheme().sign(docs[i], view.tokens()[first + i], view.rng())) {
            f.signatures.emplace_back(docs[i], std::move(*sig));
        }
    }
}

class Honest : public Strategy {
   public:
    std::string name() const override {
        return "honest";
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        const std::size_t t = std::min(view.t(), view.l());
        sign_honestly(view, f, 0, t);
        for (std::size_t i = t; i < view.l(); i++) {
            f.returned.push_back(i);
        }
        return f;
    }
};

class NaiveDoubleSign : public Strategy {
   public:
    std::string name() const override {
        return "naive-double-sign";
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        if (view.l() == 0) {
            return f;
        }
        auto &scheme = view.scheme();
        Document d1 = scheme.random_document(view.rng());
        Document d2;
        if (scheme.info().r == 1) {
            d2 = Document{static_cast<std::uint8_t>(d1.at(0) ^ 1)};
        } else {
            d2 = distinct_documents(scheme, 1, view.rng(), {d1}).front();
        }
        auto &token = view.tokens()[0];
        auto s1 = scheme.sign(d1, token, view.rng());
        auto s2 = scheme.sign_unchecked(d2, token, view.rng());
        // Zero outcomes still go in as empty signatures so that the
        // verifier, not the strategy, decides.
        f.signatures.emplace_back(d1, s1 ? std::move(*s1) : std::any());
        sign_honestly(view, f, 1, view.l() - 1, {d1, d2});
        f.signatures.emplace_back(d2, s2 ? std::move(*s2) : std::any());
        return f;
    }
};

class SpentTokenReturn : public Strategy {
   public:
    std::string name() const override {
        return "spent-token-return";
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        const std::size_t t = std::min(view.t() == 0 ? view.l() : view.t(), view.l());
        sign_honestly(view, f, 0, t);
        for (std::size_t i = 0; i < view.l(); i++) {
            f.returned.push_back(i);
        }
        return f;
    }
};

class RevokeTwice : public Strategy {
   public:
    std::string name() const override {
        return "revoke-twice";
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        if (view.l() == 0) {
            return f;
        }
        f.returned.push_back(0);
        for (std::size_t i = 0; i < view.l(); i++) {
            f.returned.push_back(i);
        }
        return f;
    }
};

class MeasureAndGuess : public Strategy {
   public:
    std::string name() const override {
        return "measure-and-guess";
    }
    Capability capability() const override {
        return Capability{false, std::nullopt, false};
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        if (view.l() == 0) {
            return f;
        }
        auto doc = view.scheme().random_document(view.rng());
        if (auto sig = view.scheme().sign_unchecked(doc, view.tokens()[0], view.rng())) {
            f.signatures.emplace_back(doc, std::move(*sig));
        }
        for (std::size_t i = 0; i < view.l(); i++) {
            f.returned.push_back(i);
        }
        return f;
    }
};

class ConsistentSubspaceGuess : public Strategy {
   public:
    std::string name() const override {
        return "consistent-subspace-guess";
    }
    Capability capability() const override {
        return Capability{false, std::nullopt, true};
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        if (view.l() == 0) {
            return f;
        }
        auto regs = view.scheme().registers(view.tokens()[0]);
        if (regs.size() != 1) {
            throw std::invalid_argument("consistent-subspace-guess needs a one-register scheme");
        }
        auto &state = regs[0]->state;
        const std::size_t n = state.ambient_n();
        regs[0]->lifecycle = ot1::Lifecycle::Spent;
        auto v = ot1::sign_register(false, state, view.rng());
        if (!v) {
            return f;
        }
        const f2::Subspace b = guess(*v, n, view.rng());
        state = qsim::prepare_subspace_state(b);
        const Document doc{0};
        f.signatures.emplace_back(doc, view.scheme().assemble(doc, view.tokens()[0], {*v}));
        for (std::size_t i = 0; i < view.l(); i++) {
            f.returned.push_back(i);
        }
        return f;
    }

   private:
    f2::Subspace guess(const F2Vector &v, std::size_t n, Rng &rng) {
        if (n <= 6) {
            auto &all = cache_[n];
            if (all.empty()) {
                all = f2::enumerate_subspaces(n, n / 2);
            }
            std::vector<const f2::Subspace *> consistent;
            for (const auto &s : all) {
                if (s.contains(v)) {
                    consistent.push_back(&s);
                }
            }
            return *consistent[rng.uniform_below(consistent.size())];
        }
        // Random completion of {v} is uniform over the subspaces containing v.
        std::vector<F2Vector> rows;
        if (!v.is_zero()) {
            rows.push_back(v);
        }
        while (f2::rank(rows) < n / 2) {
            auto w = F2Vector::random(n, rng);
            rows.push_back(w);
            if (f2::rank(rows) != rows.size()) {
                rows.pop_back();
            }
        }
        return f2::canonicalize(rows, n);
    }

    std::map<std::size_t, std::vector<f2::Subspace>> cache_;
};

class CapabilityViolator : public Strategy {
   public:
    std::string name() const override {
        return "capability-violator";
    }
    Capability capability() const override {
        return Capability{false, std::nullopt, false};
    }
    Forgery run(AdversaryView &view) override {
        view.query(0, F2Vector(view.scheme().info().n), false);
        return {};
    }
};

class SameSignatureTwice : public Strategy {
   public:
    std::string name() const override {
        return "same-signature-twice";
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        if (view.l() == 0) {
            return f;
        }
        auto doc = view.scheme().random_document(view.rng());
        auto sig = view.scheme().sign(doc, view.tokens()[0], view.rng());
        if (!sig) {
            return f;
        }
        f.signatures.emplace_back(doc, *sig);
        f.signatures.emplace_back(doc, *sig);
        sign_honestly(view, f, 1, view.l() - 1, {doc});
        return f;
    }
};

class CollisionForger : public Strategy {
   public:
    static constexpr std::size_t kMaxEvaluations = 512;

    std::string name() const override {
        return "collision-forger";
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        if (view.l() == 0) {
            return f;
        }
        auto &scheme = view.scheme();
        auto &token = view.tokens()[0];
        std::map<std::vector<bool>, Document> seen;
        std::optional<std::pair<Document, Document>> hit;
        std::size_t evals = 0;
        while (evals < kMaxEvaluations && !hit) {
            const std::string text = "msg-" + std::to_string(evals);
            Document doc(text.begin(), text.end());
            auto d = scheme.digest(token, doc);
            evals++;
            auto [it, fresh] = seen.emplace(std::move(d), doc);
            if (!fresh) {
                hit.emplace(it->second, std::move(doc));
            }
        }
        f.notes["hash_evaluations"] = static_cast<double>(evals);
        f.notes["collision_found"] = hit ? 1.0 : 0.0;
        if (!hit) {
            return f;
        }
        auto sig = scheme.sign(hit->first, token, view.rng());
        if (!sig) {
            return f;
        }
        f.signatures.emplace_back(hit->first, *sig);
        f.signatures.emplace_back(hit->second, *sig);
        sign_honestly(view, f, 1, view.l() - 1, {hit->first, hit->second});
        return f;
    }
};

class MeasureAndRebuild : public Strategy {
   public:
    std::string name() const override {
        return "measure-and-rebuild";
    }
    Capability capability() const override {
        return Capability{false, std::nullopt, false};
    }
    Forgery run(AdversaryView &view) override {
        Forgery f;
        if (view.l() == 0) {
            return f;
        }
        for (auto *reg : view.scheme().registers(view.tokens()[0])) {
            ot1::sign_register(false, reg->state, view.rng());
        }
        // The collapsed state is a known basis state, so copying it is
        // physically allowed.
        const std::size_t copy = view.add_token(view.tokens()[0]);
        f.returned.push_back(0);
        f.returned.push_back(copy);
        for (std::size_t i = 1; i < view.l(); i++) {
            f.returned.push_back(i);
        }
        return f;
    }
};

}  // namespace

std::unique_ptr<Strategy> honest_strategy() {
    return std::make_unique<Honest>();
}
std::unique_ptr<Strategy> naive_double_sign() {
    return std::make_unique<NaiveDoubleSign>();
}
std::unique_ptr<Strategy> spent_token_return() {
    return std::make_unique<SpentTokenReturn>();
}
std::unique_ptr<Strategy> revoke_twice() {
    return std::make_unique<RevokeTwice>();
}
std::unique_ptr<Strategy> measure_and_guess() {
    return std::make_unique<MeasureAndGuess>();
}
std::unique_ptr<Strategy> consistent_subspace_guess() {
    return std::make_unique<ConsistentSubspaceGuess>();
}
std::unique_ptr<Strategy> capability_violator() {
    return std::make_unique<CapabilityViolator>();
}
std::unique_ptr<Strategy> same_signature_twice() {
    return std::make_unique<SameSignatureTwice>();
}
std::unique_ptr<Strategy> collision_forger() {
    return std::make_unique<CollisionForger>();
}
std::unique_ptr<Strategy> measure_and_rebuild() {
    return std::make_unique<MeasureAndRebuild>();
}

std::unique_ptr<Strategy> make_strategy(const std::string &name) {
    if (name == "honest") {
        return honest_strategy();
    }
    if (name == "naive-double-sign") {
        return naive_double_sign();
    }
    if (name == "spent-token-return") {
        return spent_token_return();
    }
    if (name == "revoke-twice") {
        return revoke_twice();
    }
    if (name == "measure-and-guess") {
        return measure_and_guess();
    }
    if (name == "consistent-subspace-guess") {
        return consistent_subspace_guess();
    }
    if (name == "capability-violator") {
        return capability_violator();
    }
    if (name == "same-signature-twice") {
        return same_signature_twice();
    }
    if (name == "collision-forger") {
        return collision_forger();
    }
    if (name == "measure-and-rebuild") {
        return measure_and_rebuild();
    }
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

// ---------------------------------------------------------------------------
// Games.

namespace {

double q_rate(std::size_t n) {
    const double h = std::ldexp(1.0, static_cast<int>(n / 2));
    return (h - 1.0) / std::ldexp(1.0, static_cast<int>(n));
}

double fail_rate(std::size_t n) {
    return std::ldexp(1.0, -static_cast<int>(n / 2));
}

struct SigRef {
    const std::any *sig;
    const GameScheme *scheme;
    bool operator==(const SigRef &o) const {
        if (!sig->has_value() || !o.sig->has_value()) {
            return !sig->has_value() && !o.sig->has_value();
        }
        return scheme->same_signature(*sig, *o.sig);
    }
};

std::vector<std::pair<Document, SigRef>> refs(const Forgery &f, const GameScheme &scheme) {
    std::vector<std::pair<Document, SigRef>> out;
    for (const auto &[doc, sig] : f.signatures) {
        out.emplace_back(doc, SigRef{&sig, &scheme});
    }
    return out;
}

GameReport start(const std::string &game, GameScheme &scheme, const std::string &strategy, std::uint64_t trials,
                 std::uint64_t seed) {
    GameReport rep;
    rep.game = game;
    const auto info = scheme.info();
    rep.scheme = info.layer;
    rep.strategy = strategy;
    rep.trials = trials;
    rep.params["n"] = static_cast<std::int64_t>(info.n);
    rep.params["r"] = static_cast<std::int64_t>(info.r);
    rep.params["kappa"] = info.kappa;
    rep.params["trials"] = static_cast<std::int64_t>(trials);
    rep.params["seed"] = static_cast<std::int64_t>(seed);
    return rep;
}

void set_analytic(GameReport &rep, double value, std::string formula) {
    rep.analytic = value;
    rep.analytic_formula = std::move(formula);
}

/// Fills the closed forms this harness knows about.
void annotate(GameReport &rep, const SchemeInfo &info, std::size_t l, std::size_t t) {
    const double q = q_rate(info.n);
    const double ok = 1.0 - fail_rate(info.n);
    const double r = static_cast<double>(info.r);
    const std::string &s = rep.strategy;
    if (s == "honest" && rep.game != "testability") {
        set_analytic(rep, 0.0, "0");
        return;
    }
    if (rep.game == "unforgeability") {
        if (s == "naive-double-sign" && info.r == 1) {
            set_analytic(rep, std::pow(ok, static_cast<double>(l)) * q, "(1-2^{-n/2})^l (2^{n/2}-1)/2^n");
            rep.extras["analytic_conditional"] = q;
        } else if (s == "same-signature-twice") {
            set_analytic(rep, 0.0, "0");
        } else if (s == "collision-forger" && l == 1) {
            set_analytic(rep, std::pow(ok, r), "(1-2^{-n/2})^r");
        }
    } else if (rep.game == "super-security" && s == "same-signature-twice") {
        set_analytic(rep, 0.0, "0");
    } else if (rep.game == "revocability" && l == 1) {
        if ((s == "spent-token-return" && t == 1) || (s == "revoke-twice" && t == 0)) {
            set_analytic(rep, std::pow(ok * (1.0 + q) / 2.0, r), "((1-2^{-n/2})(1+q)/2)^r, q=(2^{n/2}-1)/2^n");
        }
    } else if (rep.game == "everlasting" && s == "measure-and-guess" && l == 1) {
        if (rep.extras.count("destruction_revoke") != 0) {
            set_analytic(rep, std::pow(ok * (1.0 + q) / 2.0, r), "((1-2^{-n/2})(1+q)/2)^r, q=(2^{n/2}-1)/2^n");
        } else {
            set_analytic(rep, std::pow(q, r), "((2^{n/2}-1)/2^n)^r");
        }
    } else if (rep.game == "money" && s == "measure-and-rebuild" && l == 1) {
        set_analytic(rep, std::pow(fail_rate(info.n), 2.0 * r), "2^{-n r}");
    }
}

struct Outcome {
    bool success = false;
    bool prefix_valid = false;
};

template <class Score>
GameReport play(const std::string &game, GameScheme &scheme, Strategy &strategy, std::size_t l, std::size_t t,
                std::uint64_t trials, std::uint64_t seed, bool withhold, Score &&score) {
    GameReport rep = start(game, scheme, strategy.name(), trials, seed);
    rep.params["l"] = static_cast<std::int64_t>(l);
    if (game == "revocability") {
        rep.params["t"] = static_cast<std::int64_t>(t);
    }
    const Rng master(seed);
    std::uint64_t violations = 0, prefix = 0, queries = 0;
    std::map<std::string, double> notes;
    for (std::uint64_t trial = 0; trial < trials; trial++) {
        Rng rng = master.split(trial);
        scheme.keygen(rng);
        std::vector<std::any> tokens;
        for (std::size_t i = 0; i < l; i++) {
            tokens.push_back(scheme.mint(rng));
        }
        AdversaryView view(scheme, strategy.capability(), std::move(tokens), rng, l, t);
        Forgery f;
        if (withhold) {
            scheme.set_oracle_mode(ot1::OracleMode::Withheld);
        }
        try {
            f = strategy.run(view);
        } catch (const CapabilityViolation &) {
            violations++;
            scheme.set_oracle_mode(ot1::OracleMode::Public);
            continue;
        } catch (const ot1::OracleWithheld &) {
            violations++;
            scheme.set_oracle_mode(ot1::OracleMode::Public);
            continue;
        }
        scheme.set_oracle_mode(ot1::OracleMode::Public);
        queries += view.queries();
        for (const auto &[k, v] : f.notes) {
            notes[k] += v;
        }
        const Outcome o = score(view, f, rng);
        rep.successes += o.success ? 1 : 0;
        prefix += o.prefix_valid ? 1 : 0;
    }
    rep.extras["violations"] = static_cast<double>(violations);
    rep.extras["prefix_valid"] = static_cast<double>(prefix);
    rep.extras["queries"] = static_cast<double>(queries);
    for (const auto &[k, v] : notes) {
        rep.extras[k] = v;
    }
    rep.finish();
    if (prefix > 0) {
        rep.extras["conditional_rate"] = static_cast<double>(rep.successes) / static_cast<double>(prefix);
    }
    return rep;
}

bool pairs_verify_k(GameScheme &scheme, const Forgery &f, std::size_t k, bool prime) {
    if (f.signatures.size() < k) {
        return false;
    }
    auto pairs = refs(f, scheme);
    auto check = [&](const Document &doc, const SigRef &ref) {
        return ref.sig->has_value() && scheme.verify(doc, *ref.sig);
    };
    return prime ? stack::verify_prime_k(pairs, check) : stack::verify_k(pairs, check);
}

bool prefix_verifies(GameScheme &scheme, const Forgery &f) {
    if (f.signatures.empty()) {
        return false;
    }
    for (std::size_t i = 0; i + 1 < f.signatures.size(); i++) {
        const auto &[doc, sig] = f.signatures[i];
        if (!sig.has_value() || !scheme.verify(doc, sig)) {
            return false;
        }
    }
    return true;
}

}  // namespace

GameReport game_unforgeability(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                               std::uint64_t seed) {
    auto rep = play("unforgeability", scheme, strategy, l, l, trials, seed, false,
                    [&](AdversaryView &, const Forgery &f, Rng &) {
                        return Outcome{pairs_verify_k(scheme, f, l + 1, false), prefix_verifies(scheme, f)};
                    });
    annotate(rep, scheme.info(), l, 0);
    return rep;
}

GameReport game_super_security(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                               std::uint64_t seed) {
    auto rep = play("super-security", scheme, strategy, l, l, trials, seed, false,
                    [&](AdversaryView &, const Forgery &f, Rng &) {
                        return Outcome{pairs_verify_k(scheme, f, l + 1, true), prefix_verifies(scheme, f)};
                    });
    annotate(rep, scheme.info(), l, 0);
    return rep;
}

GameReport game_revocability(GameScheme &scheme, Strategy &strategy, std::size_t l, std::size_t t,
                             std::uint64_t trials, std::uint64_t seed) {
    if (t > l) {
        throw std::invalid_argument("revocability needs t <= l");
    }
    auto rep = play("revocability", scheme, strategy, l, t, trials, seed, false,
                    [&](AdversaryView &view, const Forgery &f, Rng &rng) {
                        const bool sigs = t == 0 || pairs_verify_k(scheme, f, t, false);
                        if (f.returned.size() < l - t + 1) {
                            return Outcome{false, sigs};
                        }
                        bool revoked = true;
                        for (auto idx : f.returned) {
                            revoked = scheme.revoke(view.tokens().at(idx), rng) && revoked;
                        }
                        return Outcome{sigs && revoked, sigs};
                    });
    annotate(rep, scheme.info(), l, t);
    return rep;
}

GameReport game_everlasting(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                            std::uint64_t seed, Destruction destruction) {
    auto rep = play("everlasting", scheme, strategy, l, 0, trials, seed, true,
                    [&](AdversaryView &view, const Forgery &f, Rng &rng) {
                        if (f.returned.size() < l) {
                            return Outcome{};
                        }
                        bool destroyed = true;
                        for (auto idx : f.returned) {
                            auto &token = view.tokens().at(idx);
                            const bool ok = destruction == Destruction::Revoke ? scheme.revoke(token, rng)
                                                                               : scheme.verify_token(token, rng);
                            destroyed = ok && destroyed;
                        }
                        bool forged = false;
                        for (const auto &[doc, sig] : f.signatures) {
                            forged = forged || (sig.has_value() && scheme.verify(doc, sig));
                        }
                        return Outcome{destroyed && forged, destroyed};
                    });
    if (destruction == Destruction::Revoke) {
        rep.extras["destruction_revoke"] = 1.0;
    }
    annotate(rep, scheme.info(), l, 0);
    return rep;
}

GameReport game_money(GameScheme &scheme, Strategy &strategy, std::size_t l, std::uint64_t trials,
                      std::uint64_t seed) {
    auto rep = play("money", scheme, strategy, l, 0, trials, seed, false,
                    [&](AdversaryView &view, const Forgery &f, Rng &rng) {
                        std::set<std::size_t> distinct(f.returned.begin(), f.returned.end());
                        if (distinct.size() < l + 1) {
                            return Outcome{};
                        }
                        bool all = true;
                        for (auto idx : distinct) {
                            all = scheme.verify_token(view.tokens().at(idx), rng) && all;
                        }
                        return Outcome{all, all};
                    });
    annotate(rep, scheme.info(), l, 0);
    return rep;
}

GameReport game_testability(GameScheme &scheme, std::size_t k, std::uint64_t trials, std::uint64_t seed,
                            const TokenPreparer &prepare) {
    GameReport rep = start("testability", scheme, prepare ? "prepared-token" : "honest", trials, seed);
    rep.params["k"] = static_cast<std::int64_t>(k);
    const Rng master(seed);
    std::uint64_t first = 0, all = 0;
    for (std::uint64_t trial = 0; trial < trials; trial++) {
        Rng rng = master.split(trial);
        scheme.keygen(rng);
        std::any token = scheme.mint(rng);
        if (prepare) {
            prepare(scheme, token, rng);
        }
        bool accepted = true;
        for (std::size_t i = 0; i < k; i++) {
            const bool ok = scheme.verify_token(token, rng);
            if (i == 0 && ok) {
                first++;
            }
            if (!ok) {
                accepted = false;
                break;
            }
        }
        if (!accepted) {
            continue;
        }
        all++;
        auto doc = scheme.random_document(rng);
        auto sig = scheme.sign(doc, token, rng);
        if (sig && scheme.verify(doc, *sig)) {
            rep.successes++;
        }
    }
    rep.extras["first_accepted"] = static_cast<double>(first);
    rep.extras["all_accepted"] = static_cast<double>(all);
    rep.finish();
    if (!prepare) {
        const auto info = scheme.info();
        set_analytic(rep, std::pow(1.0 - fail_rate(info.n), static_cast<double>(info.r)), "(1-2^{-n/2})^r");
    }
    return rep;
}

GameReport game_unpredictability(GameScheme &scheme, std::uint64_t trials, std::uint64_t seed) {
    GameReport rep = start("unpredictability", scheme, "two-tokens-one-document", trials, seed);
    const Rng master(seed);
    std::uint64_t both = 0;
    for (std::uint64_t trial = 0; trial < trials; trial++) {
        Rng rng = master.split(trial);
        scheme.keygen(rng);
        std::any t1 = scheme.mint(rng);
        std::any t2 = scheme.mint(rng);
        auto doc = scheme.random_document(rng);
        auto s1 = scheme.sign(doc, t1, rng);
        auto s2 = scheme.sign(doc, t2, rng);
        if (s1 && s2) {
            both++;
            if (scheme.same_signature(*s1, *s2)) {
                rep.successes++;
            }
        }
    }
    // Equality is only meaningful when both signatures exist.
    rep.trials = both;
    rep.extras["signed_both"] = static_cast<double>(both);
    rep.finish();
    set_analytic(rep, 0.0, "0");
    return rep;
}

GameReport game_mds_unpredictability(const stack::TsParams &params, bool memoized, std::uint64_t trials,
                                     std::uint64_t seed) {
    GameReport rep;
    rep.game = "unpredictability";
    rep.scheme = "ts-mds";
    rep.strategy = memoized ? "memoized-signer" : "mds-sign";
    rep.params["n"] = static_cast<std::int64_t>(params.n);
    rep.params["r"] = static_cast<std::int64_t>(params.hash_bits);
    rep.params["kappa"] = params.kappa;
    rep.params["trials"] = static_cast<std::int64_t>(trials);
    rep.params["seed"] = static_cast<std::int64_t>(seed);
    rep.trials = trials;
    const Rng master(seed);
    std::uint64_t both = 0;
    for (std::uint64_t trial = 0; trial < trials; trial++) {
        Rng rng = master.split(trial);
        auto keys = stack::ts_keygen(params, rng);
        auto doc = stack::random_document(params.kappa, rng);
        std::optional<stack::TsSignature> s1, s2;
        if (memoized) {
            stack::MemoizedSigner signer(keys.sk);
            s1 = signer.sign(doc, rng);
            s2 = signer.sign(doc, rng);
        } else {
            s1 = stack::mds_sign(keys.sk, doc, rng);
            s2 = stack::mds_sign(keys.sk, doc, rng);
        }
        if (s1 && s2) {
            both++;
            rep.successes += *s1 == *s2 ? 1 : 0;
        }
    }
    // Equality is only meaningful when both signatures exist.
    rep.trials = both;
    rep.extras["signed_both"] = static_cast<double>(both);
    rep.finish();
    set_analytic(rep, memoized ? 1.0 : 0.0, memoized ? "1" : "0");
    return rep;
}

GameReport query_count_experiment(std::size_t n, QueryStrategy strategy, std::uint64_t budget,
                                  std::uint64_t trials, std::uint64_t seed) {
    GameReport rep;
    rep.game = "query-count";
    rep.scheme = "ot1";
    rep.strategy = strategy == QueryStrategy::MeasureAndGuess ? "measure-and-guess"
                   : strategy == QueryStrategy::RandomQuery   ? "random-query"
                                                              : "exhaustive";
    if (strategy == QueryStrategy::MeasureAndGuess) {
        budget = 0;
    }
    if (strategy == QueryStrategy::Exhaustive) {
        if (n > 16) {
            throw std::invalid_argument("exhaustive search is limited to n <= 16");
        }
        budget = std::uint64_t{2} << n;
    }
    rep.params["n"] = static_cast<std::int64_t>(n);
    rep.params["budget"] = static_cast<std::int64_t>(budget);
    rep.params["trials"] = static_cast<std::int64_t>(trials);
    rep.params["seed"] = static_cast<std::int64_t>(seed);
    rep.trials = trials;
    const Rng master(seed);
    std::uint64_t queries = 0;
    for (std::uint64_t trial = 0; trial < trials; trial++) {
        Rng rng = master.split(trial);
        auto keys = ot1::ot1_keygen(16, rng, n);
        const auto &a_space = keys.sk.space;
        auto &oracle = *keys.pk;
        std::optional<F2Vector> a, b;
        if (strategy == QueryStrategy::Exhaustive) {
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); x++) {
                auto v = F2Vector::from_index(x, n);
                const bool in_a = oracle.query(v, false);
                const bool in_dual = oracle.query(v, true);
                if (!v.is_zero() && in_a && !a) {
                    a = v;
                }
                if (!v.is_zero() && in_dual && !b) {
                    b = v;
                }
            }
        } else {
            auto state = qsim::prepare_subspace_state(a_space);
            a = ot1::sign_register(false, state, rng);
            for (std::uint64_t i = 0; i < budget && !b; i++) {
                auto v = F2Vector::random(n, rng);
                if (!v.is_zero() && oracle.query(v, true)) {
                    b = v;
                }
            }
            if (!b) {
                b = ot1::sign_register(true, state, rng);
            }
        }
        queries += oracle.query_count();
        const bool ok = a && b && !a->is_zero() && !b->is_zero() && f2::chi_star(a_space, *a, false) &&
                        f2::chi_star(a_space, *b, true);
        rep.successes += ok ? 1 : 0;
    }
    rep.extras["mean_queries"] = trials == 0 ? 0.0 : static_cast<double>(queries) / static_cast<double>(trials);
    rep.finish();
    const double q = q_rate(n);
    const double ok = 1.0 - fail_rate(n);
    if (strategy == QueryStrategy::Exhaustive) {
        set_analytic(rep, 1.0, "1");
    } else {
        set_analytic(rep, ok * (1.0 - std::pow(1.0 - q, static_cast<double>(budget) + 1.0)),
                     "(1-2^{-n/2})(1-(1-q)^{budget+1}), q=(2^{n/2}-1)/2^n");
    }
    return rep;
}

GameReport relation_statistics(std::size_t n, std::uint64_t samples, std::uint64_t seed) {
    if (n < 4 || n % 2 != 0) {
        throw std::invalid_argument("relation_statistics needs even n >= 4");
    }
    GameReport rep;
    rep.game = "relation-statistics";
    rep.scheme = "f2";
    rep.strategy = "sample";
    rep.params["n"] = static_cast<std::int64_t>(n);
    rep.params["trials"] = static_cast<std::int64_t>(samples);
    rep.params["seed"] = static_cast<std::int64_t>(seed);
    const Rng master(seed);
    double ip_min = 1.0, ip_max = 0.0;
    std::size_t dim_min = n, dim_max = 0;
    std::uint64_t a_stays = 0, b_stays = 0;
    auto nonzero = [](const f2::Subspace &s, Rng &rng) {
        while (true) {
            auto v = f2::sample_element(s, rng);
            if (!v.is_zero()) {
                return v;
            }
        }
    };
    for (std::uint64_t i = 0; i < samples; i++) {
        Rng rng = master.split(i);
        auto a_space = f2::sample_subspace(n, rng);
        auto a = nonzero(a_space, rng);
        auto b = nonzero(f2::dual(a_space), rng);
        auto b_space = f2::sample_related(a_space, rng);
        const std::size_t d = f2::intersection_dim(a_space, b_space);
        const double ip = std::ldexp(1.0, static_cast<int>(d) - static_cast<int>(n / 2));
        ip_min = std::min(ip_min, ip);
        ip_max = std::max(ip_max, ip);
        dim_min = std::min(dim_min, d);
        dim_max = std::max(dim_max, d);
        const bool in_b = b_space.contains(a);
        const bool in_dual = f2::chi_star(b_space, b, true);
        a_stays += in_b ? 1 : 0;
        b_stays += in_dual ? 1 : 0;
        rep.successes += (in_b && in_dual) ? 1 : 0;
    }
    rep.trials = samples;
    rep.finish();
    rep.extras["inner_product_min"] = ip_min;
    rep.extras["inner_product_max"] = ip_max;
    rep.extras["intersection_dim_min"] = static_cast<double>(dim_min);
    rep.extras["intersection_dim_max"] = static_cast<double>(dim_max);
    rep.extras["a_in_b"] = static_cast<double>(a_stays);
    rep.extras["b_in_b_dual"] = static_cast<double>(b_stays);
    const double h = std::ldexp(1.0, static_cast<int>(n / 2));
    const double pa = 0.5 * (1.0 - 1.0 / (h - 1.0));
    const double pb = (h / 2.0 - 1.0) / (h - 1.0);
    set_analytic(rep, pa * pb, "(1/2)(1-1/(2^{n/2}-1)) (2^{n/2-1}-1)/(2^{n/2}-1)");
    return rep;
}

Transcript two_faced_demo(const stack::TsParams &params, AliceMode mode, Rng &rng) {
    Transcript tr;
    auto keys = stack::ts_keygen(params, rng);
    const Bytes x = to_bytes("prefer:attack");
    const Bytes not_x = to_bytes("prefer:retreat");
    auto token = stack::ts_token_gen(keys.sk, rng);
    tr.lines.push_back(mode == AliceMode::TwoTokens ? "alice holds 2 tokens" : "alice holds 1 token");

    auto sig_bob = stack::ts_sign(x, token, rng);
    if (!sig_bob) {
        tr.lines.push_back("alice: signing failed");
        tr.verdict = "no signature";
        return tr;
    }
    tr.alice_signed = true;
    tr.bob_accepts = stack::ts_verify(keys.pk, x, *sig_bob);
    tr.lines.push_back(std::string("alice -> bob: prefer:attack, bob ") + (tr.bob_accepts ? "accepts" : "rejects"));

    Bytes charlie_doc = x;
    std::optional<stack::TsSignature> sig_charlie;
    if (mode == AliceMode::Honest) {
        sig_charlie = sig_bob;
    } else if (mode == AliceMode::Equivocate) {
        charlie_doc = not_x;
        auto &ot = token.ot_token;
        auto digest = stack::ot_digest(ot.s, ot.otr.components.size(), not_x);
        if (auto inner = stack::otr_sign_unchecked(digest, ot.otr, rng)) {
            sig_charlie = stack::TsSignature{token.ot_pk, token.chain_sig, std::move(*inner)};
        }
    } else {
        charlie_doc = not_x;
        auto second = stack::ts_token_gen(keys.sk, rng);
        sig_charlie = stack::ts_sign(not_x, second, rng);
    }
    tr.charlie_accepts = sig_charlie && stack::ts_verify(keys.pk, charlie_doc, *sig_charlie);
    tr.lines.push_back(std::string("alice -> charlie: ") + std::string(charlie_doc.begin(), charlie_doc.end()) +
                       ", charlie " + (tr.charlie_accepts ? "accepts" : "rejects"));

    const bool differ = charlie_doc != x;
    if (!differ) {
        tr.verdict = "consistent";
    } else if (!tr.charlie_accepts || !tr.bob_accepts) {
        tr.verdict = "equivocation detected";
    } else if (mode == AliceMode::TwoTokens) {
        tr.verdict = "equivocation possible with l=2";
    } else {
        tr.verdict = "conflicting signatures";
    }
    tr.lines.push_back("bob <-> charlie: " + tr.verdict);
    return tr;
}

GameReport two_faced_experiment(const stack::TsParams &params, AliceMode mode, std::uint64_t runs,
                                std::uint64_t seed) {
    GameReport rep;
    rep.game = "two-faced";
    rep.scheme = "ts";
    rep.strategy = mode == AliceMode::Honest ? "honest" : mode == AliceMode::Equivocate ? "equivocate" : "two-tokens";
    rep.params["n"] = static_cast<std::int64_t>(params.n);
    rep.params["r"] = static_cast<std::int64_t>(params.hash_bits);
    rep.params["kappa"] = params.kappa;
    rep.params["runs"] = static_cast<std::int64_t>(runs);
    rep.params["seed"] = static_cast<std::int64_t>(seed);
    const Rng master(seed);
    std::uint64_t signed_runs = 0, rejects = 0;
    for (std::uint64_t i = 0; i < runs; i++) {
        Rng rng = master.split(i);
        auto tr = two_faced_demo(params, mode, rng);
        if (!tr.alice_signed || !tr.bob_accepts) {
            continue;
        }
        signed_runs++;
        rejects += tr.charlie_accepts ? 0 : 1;
    }
    rep.successes = rejects;
    rep.trials = signed_runs;
    rep.finish();
    rep.extras["runs_with_first_signature"] = static_cast<double>(signed_runs);
    if (mode == AliceMode::Equivocate) {
        const double q = q_rate(params.n);
        set_analytic(rep, 1.0 - std::pow((1.0 + q) / 2.0, static_cast<double>(params.hash_bits)),
                     "1-((1+q)/2)^r, q=(2^{n/2}-1)/2^n");
    }
    return rep;
}

}  // namespace qtsl::games
