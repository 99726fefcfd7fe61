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

#include <gtest/gtest.h>

#include "json.hpp"

#include "qtsl/codec.hpp"

using namespace qtsl;
using namespace qtsl::codec;
using nlohmann::json;

namespace {

stack::TsParams small_params(prim::DsAlgorithm ds = prim::DsAlgorithm::ed25519) {
    auto p = stack::TsParams::defaults(16);
    p.n = 24;
    p.hash_bits = 16;
    p.ds = ds;
    p.merkle_height = 3;
    return p;
}

struct Artifacts {
    std::vector<std::string> texts;
};

Artifacts make_artifacts(Rng &rng) {
    Artifacts a;
    auto kp = stack::ts_keygen(small_params(), rng);
    a.texts.push_back(encode(kp.pk));
    a.texts.push_back(encode(kp.sk));
    auto token = stack::ts_token_gen(kp.sk, rng);
    a.texts.push_back(encode(token));
    auto sig = stack::ts_sign(to_bytes("doc"), token, rng);
    a.texts.push_back(encode(token));
    if (sig) {
        a.texts.push_back(encode(*sig));
    }
    auto coin = money::coin_mint(kp.sk, rng);
    a.texts.push_back(encode(coin));
    try {
        a.texts.push_back(encode(money::check_write(coin, "bob|x", 2, 1000, rng)));
    } catch (const money::CheckWriteError &) {
    }
    privts::TmParams tp = privts::TmParams::defaults(16);
    a.texts.push_back(encode(privts::tm_keygen(tp, rng)));
    auto scheme = games::make_ot1_scheme(4);
    auto s = games::naive_double_sign();
    a.texts.push_back(encode(games::game_unforgeability(*scheme, *s, 1, 20, 1)));
    return a;
}

}  // namespace

TEST(Codec, bits) {
    EXPECT_EQ(encode_bits(f2::F2Vector::from_string("0110")), "\"0110\"");
    EXPECT_EQ(decode_bits("\"0110\""), f2::F2Vector::from_string("0110"));
    EXPECT_THROW(decode_bits("\"01a0\""), DecodeError);
    EXPECT_THROW(decode_bits("0110"), DecodeError);
    f2::F2Vector wide(70);
    wide.set(0, true);
    wide.set(69, true);
    auto j = json::parse(encode_bits(wide));
    ASSERT_TRUE(j.is_object());
    EXPECT_EQ(j["bits"], 70);
    EXPECT_EQ(decode_bits(encode_bits(wide)), wide);
}

TEST(Codec, subspace_uses_canonical_rows) {
    auto s = f2::Subspace::from_string("0011\n1110", 4);
    const auto text = encode_subspace(s);
    EXPECT_EQ(text, "[\"1101\",\"0011\"]");
    EXPECT_EQ(decode_subspace(text, 4), s);
    // Spanning but non-reduced rows are rejected.
    EXPECT_THROW(decode_subspace("[\"0011\",\"1110\"]", 4), DecodeError);
    EXPECT_THROW(decode_subspace("[\"1101\",\"0011\"]", 6), DecodeError);
}

TEST(Codec, secrecy_labels) {
    EXPECT_EQ(secrecy_of(Kind::TsSk), Secrecy::Secret);
    EXPECT_EQ(secrecy_of(Kind::PrivKey), Secrecy::Secret);
    EXPECT_EQ(secrecy_of(Kind::Token), Secrecy::SimulationSecret);
    EXPECT_EQ(secrecy_of(Kind::Coin), Secrecy::SimulationSecret);
    EXPECT_EQ(secrecy_of(Kind::TsPk), Secrecy::Public);
    EXPECT_EQ(secrecy_of(Kind::Signature), Secrecy::Public);
}

TEST(Codec, every_kind_round_trips) {
    Rng rng(1);
    auto a = make_artifacts(rng);
    std::set<Kind> kinds;
    for (const auto &text : a.texts) {
        kinds.insert(peek_kind(text));
        EXPECT_EQ(reencode(text), text);
        auto j = json::parse(text);
        EXPECT_EQ(j["magic"], "QTSL");
        EXPECT_EQ(j["version"], kVersion);
        EXPECT_EQ(j["secrecy"], std::string(to_string(secrecy_of(peek_kind(text)))));
    }
    EXPECT_EQ(kinds.size(), 8u);
}

TEST(Codec, decoded_objects_still_work) {
    Rng rng(2);
    auto kp = stack::ts_keygen(small_params(prim::DsAlgorithm::merkle_lamport), rng);
    auto sk = decode_ts_sk(encode(kp.sk));
    auto pk = decode_ts_pk(encode(kp.pk));
    EXPECT_EQ(pk, kp.pk);
    auto token = decode_token(encode(stack::ts_token_gen(sk, rng)));
    EXPECT_TRUE(stack::ts_verify_token(pk, token, rng));
    auto sig = stack::ts_sign(to_bytes("m"), token, rng);
    ASSERT_TRUE(sig);
    EXPECT_TRUE(stack::ts_verify(pk, to_bytes("m"), decode_signature(encode(*sig))));
    auto spent = decode_token(encode(token));
    EXPECT_TRUE(spent.spent());
    // The Merkle leaf counter survives the round trip.
    stack::ts_token_gen(sk, rng);
    auto reloaded = decode_ts_sk(encode(sk));
    EXPECT_EQ(reloaded.ds_sk.next_leaf, sk.ds_sk.next_leaf);
}

TEST(Codec, rejects_tampering) {
    Rng rng(3);
    auto kp = stack::ts_keygen(small_params(), rng);
    const auto text = encode(kp.pk);
    auto bad_magic = text;
    bad_magic.replace(bad_magic.find("QTSL"), 4, "QTSX");
    EXPECT_THROW(decode_ts_pk(bad_magic), DecodeError);
    EXPECT_THROW(decode_ts_pk(" " + text), DecodeError);
    EXPECT_THROW(decode_ts_pk(text.substr(0, text.size() / 2)), DecodeError);
    EXPECT_THROW(decode_ts_sk(text), DecodeError);
    auto j = json::parse(text);
    j["version"] = 2;
    EXPECT_THROW(decode_ts_pk(j.dump() + "\n"), DecodeError);
    j = json::parse(text);
    j["extra"] = 1;
    EXPECT_THROW(decode_ts_pk(j.dump() + "\n"), DecodeError);
    j = json::parse(text);
    j["secrecy"] = "SECRET";
    EXPECT_THROW(decode_ts_pk(j.dump() + "\n"), DecodeError);
    EXPECT_THROW(peek_kind("not json"), DecodeError);
}

TEST(Codec, mutation_fuzz) {
    Rng rng(4);
    auto a = make_artifacts(rng);
    int rejected = 0, accepted = 0;
    for (int i = 0; i < 10000; i++) {
        const auto &base = a.texts[rng.uniform_below(a.texts.size())];
        std::string m = base;
        const auto pos = rng.uniform_below(m.size());
        switch (rng.uniform_below(3)) {
            case 0:
                m[pos] = static_cast<char>(rng.uniform_below(256));
                break;
            case 1:
                m.erase(pos, 1);
                break;
            default:
                m.insert(pos, 1, static_cast<char>(rng.uniform_below(256)));
                break;
        }
        try {
            auto out = reencode(m);
            // Anything accepted must be canonical.
            EXPECT_EQ(out, m);
            accepted++;
        } catch (const DecodeError &) {
            rejected++;
        }
    }
    EXPECT_EQ(rejected + accepted, 10000);
    EXPECT_GT(rejected, 9000);
}
