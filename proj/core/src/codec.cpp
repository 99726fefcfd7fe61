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

#include "qtsl/codec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <set>

#include "json.hpp"

namespace qtsl::codec {

using nlohmann::json;
using f2::F2Vector;
using f2::Subspace;

namespace {

constexpr std::size_t kMaxTextBits = 64;
constexpr std::size_t kMaxAmbient = 4096;
constexpr std::size_t kMaxRegisters = 256;

constexpr std::array<std::string_view, 8> kKindNames = {"ts_pk",     "ts_sk", "token",    "signature",
                                                         "check",     "coin",  "priv_key", "report"};

[[noreturn]] void fail(const std::string &what) {
    throw DecodeError(what);
}

// -- field access ------------------------------------------------------------

/// Object with exactly the listed keys.
const json &object(const json &j, std::initializer_list<std::string_view> keys, const char *what) {
    if (!j.is_object() || j.size() != keys.size()) {
        fail(std::string(what) + ": wrong shape");
    }
    for (auto k : keys) {
        if (!j.contains(std::string(k))) {
            fail(std::string(what) + ": missing '" + std::string(k) + "'");
        }
    }
    return j;
}

const std::string &str(const json &j, const char *key) {
    const auto &v = j.at(key);
    if (!v.is_string()) {
        fail(std::string(key) + ": expected string");
    }
    return v.get_ref<const std::string &>();
}

std::uint64_t uint(const json &j, const char *key, std::uint64_t max) {
    const auto &v = j.at(key);
    if (!v.is_number_unsigned()) {
        fail(std::string(key) + ": expected unsigned integer");
    }
    const auto x = v.get<std::uint64_t>();
    if (x > max) {
        fail(std::string(key) + ": out of range");
    }
    return x;
}

const json &array(const json &j, const char *key) {
    const auto &v = j.at(key);
    if (!v.is_array()) {
        fail(std::string(key) + ": expected array");
    }
    return v;
}

Bytes hex(const json &j, const char *key) {
    const auto &s = str(j, key);
    if (std::any_of(s.begin(), s.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)); })) {
        fail(std::string(key) + ": hex must be lowercase");
    }
    return from_hex(s);
}

// -- bit fields ---------------------------------------------------------------

json bits_json(const F2Vector &v) {
    if (v.size() <= kMaxTextBits) {
        return v.to_string();
    }
    return json{{"bits", v.size()}, {"hex", to_hex(stack::encode_vector(v))}};
}

F2Vector bits_from_json(const json &j, std::optional<std::size_t> n = std::nullopt) {
    F2Vector v;
    if (j.is_string()) {
        const auto &s = j.get_ref<const std::string &>();
        if (s.empty() || s.size() > kMaxTextBits) {
            fail("bit string length out of range");
        }
        v = F2Vector::from_string(s);
    } else {
        object(j, {"bits", "hex"}, "bit field");
        const auto bits = uint(j, "bits", kMaxAmbient);
        if (bits <= kMaxTextBits) {
            fail("short bit fields use the text form");
        }
        const Bytes raw = hex(j, "hex");
        ByteReader reader(raw);
        v = stack::decode_vector(reader, bits);
        if (!reader.done()) {
            fail("bit field: trailing bytes");
        }
    }
    if (n && v.size() != *n) {
        fail("bit field has the wrong length");
    }
    return v;
}

json bools_json(const std::vector<bool> &bits) {
    F2Vector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); i++) {
        if (bits[i]) {
            v.set(i, true);
        }
    }
    return bits_json(v);
}

std::vector<bool> bools_from_json(const json &j) {
    const F2Vector v = bits_from_json(j);
    std::vector<bool> out(v.size());
    for (std::size_t i = 0; i < v.size(); i++) {
        out[i] = v.get(i);
    }
    return out;
}

json subspace_json(const Subspace &s) {
    json rows = json::array();
    for (const auto &b : s.basis()) {
        rows.push_back(bits_json(b));
    }
    return rows;
}

Subspace subspace_from_json(const json &j, std::size_t n) {
    if (!j.is_array() || j.size() > n) {
        fail("basis: expected at most n rows");
    }
    std::vector<F2Vector> rows;
    for (const auto &row : j) {
        rows.push_back(bits_from_json(row, n));
    }
    Subspace s = f2::canonicalize(rows, n);
    if (s.basis() != rows) {
        fail("basis is not in reduced row-echelon form");
    }
    return s;
}

// -- envelope -----------------------------------------------------------------

std::string wrap(Kind kind, json payload) {
    json j;
    j["magic"] = "QTSL";
    j["version"] = kVersion;
    j["kind"] = to_string(kind);
    j["secrecy"] = to_string(secrecy_of(kind));
    j["payload"] = std::move(payload);
    return j.dump() + "\n";
}

std::string_view strip_newline(std::string_view text) {
    if (text.empty() || text.back() != '\n') {
        fail("container must end with a single newline");
    }
    text.remove_suffix(1);
    return text;
}

json parse_envelope(std::string_view text, Kind &kind) {
    const std::string_view body = strip_newline(text);
    json j = json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded()) {
        fail("not valid JSON");
    }
    object(j, {"kind", "magic", "payload", "secrecy", "version"}, "container");
    if (str(j, "magic") != "QTSL") {
        fail("bad magic");
    }
    if (!j.at("version").is_number_unsigned() || j.at("version").get<std::uint64_t>() != kVersion) {
        fail("unsupported version");
    }
    const auto &k = str(j, "kind");
    auto it = std::find(kKindNames.begin(), kKindNames.end(), k);
    if (it == kKindNames.end()) {
        fail("unknown kind '" + k + "'");
    }
    kind = static_cast<Kind>(it - kKindNames.begin());
    if (str(j, "secrecy") != to_string(secrecy_of(kind))) {
        fail("secrecy does not match kind");
    }
    if (j.dump() != body) {
        fail("container is not canonical");
    }
    return std::move(j.at("payload"));
}

json open(std::string_view text, Kind expected) {
    Kind kind{};
    json payload = parse_envelope(text, kind);
    if (kind != expected) {
        fail("expected a " + std::string(to_string(expected)) + " container, found " +
             std::string(to_string(kind)));
    }
    return payload;
}

/// Runs a typed reader and maps every failure to DecodeError.
template <class F>
auto guarded(F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const DecodeError &) {
        throw;
    } catch (const std::exception &e) {
        throw DecodeError(e.what());
    }
}

// -- payloads -----------------------------------------------------------------

std::string_view ds_name(prim::DsAlgorithm a) {
    return a == prim::DsAlgorithm::ed25519 ? "ed25519" : "merkle-lamport";
}

prim::DsAlgorithm ds_from(const std::string &s) {
    if (s == "ed25519") {
        return prim::DsAlgorithm::ed25519;
    }
    if (s == "merkle-lamport") {
        return prim::DsAlgorithm::merkle_lamport;
    }
    fail("unknown signature algorithm '" + s + "'");
}

json params_json(const stack::TsParams &p) {
    return json{{"kappa", p.kappa},
                {"n", p.n},
                {"hash_bits", p.hash_bits},
                {"ds", ds_name(p.ds)},
                {"merkle_height", p.merkle_height}};
}

stack::TsParams params_from(const json &j) {
    object(j, {"kappa", "n", "hash_bits", "ds", "merkle_height"}, "params");
    stack::TsParams p;
    p.kappa = static_cast<unsigned>(uint(j, "kappa", 65535));
    p.n = uint(j, "n", kMaxAmbient);
    p.hash_bits = uint(j, "hash_bits", kMaxRegisters);
    p.ds = ds_from(str(j, "ds"));
    p.merkle_height = static_cast<unsigned>(uint(j, "merkle_height", 12));
    if (p.kappa == 0 || p.n < 2 || p.n % 2 != 0 || p.hash_bits == 0) {
        fail("params out of range");
    }
    return p;
}

std::string_view state_type(const qsim::CosetState &s) {
    if (s.holds<qsim::SubspaceState>()) {
        return "subspace";
    }
    if (s.holds<qsim::BasisState>()) {
        return "basis";
    }
    if (s.holds<qsim::PhaseState>()) {
        return "phase";
    }
    return "unsupported";
}

json state_json(const qsim::CosetState &s) {
    json j{{"type", state_type(s)}, {"n", s.ambient_n()}};
    if (s.holds<qsim::SubspaceState>()) {
        j["basis"] = subspace_json(s.get<qsim::SubspaceState>().space);
    } else if (s.holds<qsim::BasisState>()) {
        j["v"] = bits_json(s.get<qsim::BasisState>().v);
    } else if (s.holds<qsim::PhaseState>()) {
        j["v"] = bits_json(s.get<qsim::PhaseState>().v);
    }
    return j;
}

qsim::CosetState state_from(const json &j) {
    if (!j.is_object()) {
        fail("state: expected object");
    }
    const auto &type = str(j, "type");
    const std::size_t n = uint(j, "n", kMaxAmbient);
    if (n < 2 || n % 2 != 0) {
        fail("state: bad ambient dimension");
    }
    if (type == "subspace") {
        object(j, {"type", "n", "basis"}, "state");
        return qsim::CosetState(qsim::SubspaceState{subspace_from_json(j.at("basis"), n)}, n);
    }
    if (type == "basis") {
        object(j, {"type", "n", "v"}, "state");
        return qsim::CosetState(qsim::BasisState{bits_from_json(j.at("v"), n)}, n);
    }
    if (type == "phase") {
        object(j, {"type", "n", "v"}, "state");
        return qsim::CosetState(qsim::PhaseState{bits_from_json(j.at("v"), n)}, n);
    }
    if (type == "unsupported") {
        object(j, {"type", "n"}, "state");
        return qsim::CosetState::unsupported(n);
    }
    fail("state: unknown type '" + type + "'");
}

json token_json(const stack::TsToken &t) {
    json regs = json::array();
    for (const auto &c : t.ot_token.otr.components) {
        regs.push_back(json{{"key_id", to_hex(c.key_id)},
                            {"lifecycle", c.lifecycle == ot1::Lifecycle::Fresh ? "fresh" : "spent"},
                            {"state", state_json(c.state)}});
    }
    return json{{"ot_pk", to_hex(t.ot_pk)},
                {"chain_sig", to_hex(t.chain_sig)},
                {"s", to_hex(t.ot_token.s)},
                {"registers", std::move(regs)}};
}

stack::TsToken token_from(const json &j) {
    object(j, {"ot_pk", "chain_sig", "s", "registers"}, "token");
    stack::TsToken t;
    t.ot_pk = hex(j, "ot_pk");
    t.chain_sig = hex(j, "chain_sig");
    t.ot_token.s = hex(j, "s");
    const auto &regs = array(j, "registers");
    if (regs.empty() || regs.size() > kMaxRegisters) {
        fail("token: register count out of range");
    }
    std::optional<std::size_t> n;
    for (const auto &r : regs) {
        object(r, {"key_id", "lifecycle", "state"}, "register");
        const Bytes id = hex(r, "key_id");
        ot1::KeyId key_id{};
        if (id.size() != key_id.size()) {
            fail("register: key id must be 16 bytes");
        }
        std::copy(id.begin(), id.end(), key_id.begin());
        const auto &life = str(r, "lifecycle");
        if (life != "fresh" && life != "spent") {
            fail("register: unknown lifecycle '" + life + "'");
        }
        auto state = state_from(r.at("state"));
        if (n && *n != state.ambient_n()) {
            fail("token: registers disagree on n");
        }
        n = state.ambient_n();
        t.ot_token.otr.components.push_back(
            ot1::Ot1Token{std::move(state), key_id, life == "fresh" ? ot1::Lifecycle::Fresh : ot1::Lifecycle::Spent});
    }
    return t;
}

json signature_json(const stack::TsSignature &s) {
    json sigs = json::array();
    for (const auto &v : s.ot_sig.sigs) {
        sigs.push_back(bits_json(v));
    }
    return json{{"ot_pk", to_hex(s.ot_pk)},
                {"chain_sig", to_hex(s.chain_sig)},
                {"alpha", bools_json(s.ot_sig.alpha)},
                {"sigs", std::move(sigs)}};
}

stack::TsSignature signature_from(const json &j) {
    object(j, {"ot_pk", "chain_sig", "alpha", "sigs"}, "signature");
    stack::TsSignature s;
    s.ot_pk = hex(j, "ot_pk");
    s.chain_sig = hex(j, "chain_sig");
    s.ot_sig.alpha = bools_from_json(j.at("alpha"));
    const auto &sigs = array(j, "sigs");
    if (sigs.size() != s.ot_sig.alpha.size()) {
        fail("signature: one component per digest bit");
    }
    std::optional<std::size_t> n;
    for (const auto &v : sigs) {
        s.ot_sig.sigs.push_back(bits_from_json(v, n));
        n = s.ot_sig.sigs.back().size();
    }
    return s;
}

json check_json(const money::Check &c) {
    return json{{"payee", c.payee},
                {"branch", c.branch_id},
                {"timestamp", c.timestamp},
                {"nonce", to_hex(c.nonce)},
                {"signature", signature_json(c.signature)}};
}

money::Check check_from(const json &j) {
    object(j, {"payee", "branch", "timestamp", "nonce", "signature"}, "check");
    money::Check c;
    c.payee = str(j, "payee");
    c.branch_id = static_cast<std::uint32_t>(uint(j, "branch", 0xffffffffu));
    c.timestamp = uint(j, "timestamp", std::numeric_limits<std::uint64_t>::max());
    const Bytes nonce = hex(j, "nonce");
    if (nonce.size() != c.nonce.size()) {
        fail("check: nonce must be 16 bytes");
    }
    std::copy(nonce.begin(), nonce.end(), c.nonce.begin());
    c.signature = signature_from(j.at("signature"));
    return c;
}

}  // namespace

std::string_view to_string(Kind kind) {
    return kKindNames.at(static_cast<std::size_t>(kind));
}

std::string_view to_string(Secrecy secrecy) {
    switch (secrecy) {
        case Secrecy::Public:
            return "PUBLIC";
        case Secrecy::Secret:
            return "SECRET";
        case Secrecy::SimulationSecret:
            return "SIMULATION_SECRET";
    }
    return "PUBLIC";
}

Secrecy secrecy_of(Kind kind) {
    switch (kind) {
        case Kind::TsSk:
        case Kind::PrivKey:
            return Secrecy::Secret;
        case Kind::Token:
        case Kind::Coin:
            return Secrecy::SimulationSecret;
        default:
            return Secrecy::Public;
    }
}

Kind peek_kind(std::string_view text) {
    return guarded([&] {
        Kind kind{};
        parse_envelope(text, kind);
        return kind;
    });
}

std::string encode(const stack::TsPublicKey &pk) {
    return wrap(Kind::TsPk, json{{"params", params_json(pk.params)},
                                 {"ds_pk", json{{"algorithm", ds_name(pk.ds_pk.algorithm)},
                                                {"key", to_hex(pk.ds_pk.encoded)}}}});
}

std::string encode(const stack::TsSecretKey &sk) {
    return wrap(Kind::TsSk, json{{"params", params_json(sk.params)},
                                 {"ds_sk", json{{"algorithm", ds_name(sk.ds_sk.algorithm)},
                                                {"seed", to_hex(sk.ds_sk.seed)},
                                                {"next_leaf", sk.ds_sk.next_leaf}}}});
}

std::string encode(const stack::TsToken &token) {
    return wrap(Kind::Token, token_json(token));
}

std::string encode(const stack::TsSignature &sig) {
    return wrap(Kind::Signature, signature_json(sig));
}

std::string encode(const money::Check &check) {
    return wrap(Kind::Check, check_json(check));
}

std::string encode(const money::Coin &coin) {
    return wrap(Kind::Coin, token_json(coin.token));
}

std::string encode(const privts::TmKey &key) {
    return wrap(Kind::PrivKey, json{{"params", json{{"kappa", key.params.kappa},
                                                    {"n", key.params.n},
                                                    {"hash_bits", key.params.hash_bits}}},
                                    {"mac_key", to_hex(key.mac_key)},
                                    {"enc_key", to_hex(key.enc_key)}});
}

std::string encode(const games::GameReport &report) {
    return wrap(Kind::Report, json::parse(report.to_json_line()));
}

stack::TsPublicKey decode_ts_pk(std::string_view text) {
    return guarded([&] {
        const json p = open(text, Kind::TsPk);
        object(p, {"params", "ds_pk"}, "ts_pk");
        stack::TsPublicKey pk;
        pk.params = params_from(p.at("params"));
        const auto &d = object(p.at("ds_pk"), {"algorithm", "key"}, "ds_pk");
        pk.ds_pk.algorithm = ds_from(str(d, "algorithm"));
        pk.ds_pk.encoded = hex(d, "key");
        if (pk.ds_pk.algorithm != pk.params.ds) {
            fail("ts_pk: algorithm disagrees with params");
        }
        return pk;
    });
}

stack::TsSecretKey decode_ts_sk(std::string_view text) {
    return guarded([&] {
        const json p = open(text, Kind::TsSk);
        object(p, {"params", "ds_sk"}, "ts_sk");
        stack::TsSecretKey sk;
        sk.params = params_from(p.at("params"));
        const auto &d = object(p.at("ds_sk"), {"algorithm", "seed", "next_leaf"}, "ds_sk");
        const auto alg = ds_from(str(d, "algorithm"));
        if (alg != sk.params.ds) {
            fail("ts_sk: algorithm disagrees with params");
        }
        const Bytes seed = hex(d, "seed");
        if (seed.size() != 32) {
            fail("ts_sk: seed must be 32 bytes");
        }
        const auto leaves = alg == prim::DsAlgorithm::merkle_lamport ? (1ull << sk.params.merkle_height) : 0ull;
        const auto next = uint(d, "next_leaf", leaves);
        sk.ds_sk = prim::ds_keypair_from_seed(alg, seed, sk.params.merkle_height).sk;
        sk.ds_sk.next_leaf = static_cast<std::uint32_t>(next);
        return sk;
    });
}

stack::TsToken decode_token(std::string_view text) {
    return guarded([&] { return token_from(open(text, Kind::Token)); });
}

stack::TsSignature decode_signature(std::string_view text) {
    return guarded([&] { return signature_from(open(text, Kind::Signature)); });
}

money::Check decode_check(std::string_view text) {
    return guarded([&] { return check_from(open(text, Kind::Check)); });
}

money::Coin decode_coin(std::string_view text) {
    return guarded([&] { return money::Coin{token_from(open(text, Kind::Coin))}; });
}

privts::TmKey decode_priv_key(std::string_view text) {
    return guarded([&] {
        const json p = open(text, Kind::PrivKey);
        object(p, {"params", "mac_key", "enc_key"}, "priv_key");
        const auto &pp = object(p.at("params"), {"kappa", "n", "hash_bits"}, "params");
        privts::TmKey key;
        key.params.kappa = static_cast<unsigned>(uint(pp, "kappa", 65535));
        key.params.n = uint(pp, "n", kMaxAmbient);
        key.params.hash_bits = uint(pp, "hash_bits", kMaxRegisters);
        if (key.params.kappa == 0 || key.params.n < 2 || key.params.n % 2 != 0 || key.params.hash_bits == 0) {
            fail("priv_key: params out of range");
        }
        key.mac_key = hex(p, "mac_key");
        key.enc_key = hex(p, "enc_key");
        if (key.mac_key.size() != 32 || key.enc_key.size() != 32) {
            fail("priv_key: keys must be 32 bytes");
        }
        return key;
    });
}

games::GameReport decode_report(std::string_view text) {
    return guarded([&] {
        const json p = open(text, Kind::Report);
        object(p, {"game", "scheme", "strategy", "params", "successes", "trials", "rate", "wilson95", "analytic",
                   "extras"},
               "report");
        games::GameReport r;
        r.game = str(p, "game");
        r.scheme = str(p, "scheme");
        r.strategy = str(p, "strategy");
        const auto &params = p.at("params");
        if (!params.is_object()) {
            fail("report: params must be an object");
        }
        for (const auto &[k, v] : params.items()) {
            if (!v.is_number_integer()) {
                fail("report: integer params only");
            }
            r.params[k] = v.get<std::int64_t>();
        }
        r.successes = uint(p, "successes", std::numeric_limits<std::uint64_t>::max());
        r.trials = uint(p, "trials", std::numeric_limits<std::uint64_t>::max());
        if (r.successes > r.trials) {
            fail("report: successes exceed trials");
        }
        if (!p.at("rate").is_number()) {
            fail("report: rate must be a number");
        }
        r.rate = p.at("rate").get<double>();
        const auto &w = p.at("wilson95");
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
            fail("report: wilson95 must be [lo, hi]");
        }
        r.wilson95 = {w[0].get<double>(), w[1].get<double>()};
        const auto &a = p.at("analytic");
        if (!a.is_null()) {
            object(a, {"value", "formula"}, "analytic");
            if (!a.at("value").is_number()) {
                fail("report: analytic value must be a number");
            }
            r.analytic = a.at("value").get<double>();
            r.analytic_formula = str(a, "formula");
        }
        const auto &x = p.at("extras");
        if (!x.is_object()) {
            fail("report: extras must be an object");
        }
        for (const auto &[k, v] : x.items()) {
            if (!v.is_number()) {
                fail("report: numeric extras only");
            }
            r.extras[k] = v.get<double>();
        }
        return r;
    });
}

std::string encode_bits(const F2Vector &v) {
    return bits_json(v).dump();
}

F2Vector decode_bits(std::string_view json_text) {
    return guarded([&] {
        json j = json::parse(json_text.begin(), json_text.end(), nullptr, false);
        if (j.is_discarded()) {
            fail("not valid JSON");
        }
        return bits_from_json(j);
    });
}

std::string encode_subspace(const Subspace &s) {
    return subspace_json(s).dump();
}

Subspace decode_subspace(std::string_view json_text, std::size_t n) {
    return guarded([&] {
        json j = json::parse(json_text.begin(), json_text.end(), nullptr, false);
        if (j.is_discarded()) {
            fail("not valid JSON");
        }
        return subspace_from_json(j, n);
    });
}

std::string reencode(std::string_view text) {
    switch (peek_kind(text)) {
        case Kind::TsPk:
            return encode(decode_ts_pk(text));
        case Kind::TsSk:
            return encode(decode_ts_sk(text));
        case Kind::Token:
            return encode(decode_token(text));
        case Kind::Signature:
            return encode(decode_signature(text));
        case Kind::Check:
            return encode(decode_check(text));
        case Kind::Coin:
            return encode(decode_coin(text));
        case Kind::PrivKey:
            return encode(decode_priv_key(text));
        case Kind::Report:
            return encode(decode_report(text));
    }
    throw DecodeError("unknown kind");
}

}  // namespace qtsl::codec
