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

#include "qtsl/primitives.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <initializer_list>
#include <stdexcept>
#include <string>

namespace qtsl::prim {

namespace {

constexpr std::size_t kDigestBytes = 32;
constexpr std::size_t kLamportBits = 256;
constexpr std::size_t kIndexSaltBytes = 16;
constexpr std::size_t kGcmNonceBytes = 12;
constexpr std::size_t kGcmTagBytes = 16;

struct PkeyDeleter {
    void operator()(EVP_PKEY *p) const {
        EVP_PKEY_free(p);
    }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX *p) const {
        EVP_MD_CTX_free(p);
    }
};
struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX *p) const {
        EVP_CIPHER_CTX_free(p);
    }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

Bytes hash_concat(std::initializer_list<ByteView> parts) {
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 init failed");
    }
    for (auto p : parts) {
        EVP_DigestUpdate(ctx.get(), p.data(), p.size());
    }
    Bytes out(kDigestBytes);
    EVP_DigestFinal_ex(ctx.get(), out.data(), nullptr);
    return out;
}

// ---- Ed25519 -------------------------------------------------------------

PkeyPtr ed25519_private(ByteView seed) {
    return PkeyPtr(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
}

Bytes ed25519_public_bytes(ByteView seed) {
    auto key = ed25519_private(seed);
    if (!key) {
        throw std::runtime_error("Ed25519 key construction failed");
    }
    Bytes pk(32);
    std::size_t len = pk.size();
    if (EVP_PKEY_get_raw_public_key(key.get(), pk.data(), &len) != 1 || len != 32) {
        throw std::runtime_error("Ed25519 public key export failed");
    }
    return pk;
}

Bytes ed25519_sign(ByteView seed, ByteView message) {
    auto key = ed25519_private(seed);
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!key || !ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
        throw std::runtime_error("Ed25519 sign init failed");
    }
    Bytes sig(64);
    std::size_t len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 || len != 64) {
        throw std::runtime_error("Ed25519 sign failed");
    }
    return sig;
}

bool ed25519_verify(ByteView pk, ByteView message, ByteView sig) {
    if (pk.size() != 32 || sig.size() != 64) {
        return false;
    }
    PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, pk.data(), pk.size()));
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!key || !ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
        return false;
    }
    return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), message.data(), message.size()) == 1;
}

}  // namespace

// ---- Merkle-Lamport --------------------------------------------------------

struct MerkleTree {
    unsigned height = 0;
    // levels[0] holds the leaves, levels[height] the root.
    std::vector<std::vector<Bytes>> levels;
};

namespace {

Bytes lamport_secret(ByteView seed, std::uint32_t leaf, std::uint32_t bit, std::uint8_t value) {
    const std::uint8_t tag[] = {'L',
                                static_cast<std::uint8_t>(leaf >> 24),
                                static_cast<std::uint8_t>(leaf >> 16),
                                static_cast<std::uint8_t>(leaf >> 8),
                                static_cast<std::uint8_t>(leaf),
                                static_cast<std::uint8_t>(bit >> 8),
                                static_cast<std::uint8_t>(bit),
                                value};
    return hash_concat({seed, ByteView(tag, sizeof(tag))});
}

Bytes node_hash(ByteView left, ByteView right) {
    const std::uint8_t prefix = 1;
    return hash_concat({ByteView(&prefix, 1), left, right});
}

Bytes lamport_leaf(ByteView seed, std::uint32_t leaf) {
    Bytes all;
    all.reserve(2 * kLamportBits * kDigestBytes);
    for (std::uint32_t j = 0; j < kLamportBits; j++) {
        for (std::uint8_t b = 0; b < 2; b++) {
            auto pk = sha256(lamport_secret(seed, leaf, j, b));
            all.insert(all.end(), pk.begin(), pk.end());
        }
    }
    return sha256(all);
}

std::shared_ptr<const MerkleTree> build_tree(ByteView seed, unsigned height) {
    if (height > 16) {
        throw std::invalid_argument("Merkle height must be <= 16");
    }
    auto tree = std::make_shared<MerkleTree>();
    tree->height = height;
    tree->levels.resize(height + 1);
    for (std::uint32_t i = 0; i < (1u << height); i++) {
        tree->levels[0].push_back(lamport_leaf(seed, i));
    }
    for (unsigned h = 1; h <= height; h++) {
        const auto &below = tree->levels[h - 1];
        for (std::size_t i = 0; i < below.size(); i += 2) {
            tree->levels[h].push_back(node_hash(below[i], below[i + 1]));
        }
    }
    return tree;
}

bool digest_bit(ByteView digest, std::size_t j) {
    return (digest[j / 8] >> (7 - j % 8)) & 1;
}

Bytes merkle_sign(DsSecretKey &sk, ByteView message) {
    if (!sk.tree) {
        sk.tree = build_tree(sk.seed, sk.merkle_height);
    }
    if (sk.next_leaf >= (1u << sk.merkle_height)) {
        throw std::runtime_error("Merkle-Lamport key exhausted");
    }
    const std::uint32_t leaf = sk.next_leaf++;
    auto digest = sha256(message);
    ByteWriter w;
    w.u32(leaf);
    for (std::uint32_t j = 0; j < kLamportBits; j++) {
        w.raw(lamport_secret(sk.seed, leaf, j, digest_bit(digest, j)));
    }
    for (std::uint32_t j = 0; j < kLamportBits; j++) {
        w.raw(sha256(lamport_secret(sk.seed, leaf, j, !digest_bit(digest, j))));
    }
    std::uint32_t index = leaf;
    for (unsigned h = 0; h < sk.merkle_height; h++) {
        w.raw(sk.tree->levels[h][index ^ 1]);
        index >>= 1;
    }
    return w.take();
}

bool merkle_verify(ByteView pk, ByteView message, ByteView sig) {
    if (pk.size() != 1 + kDigestBytes) {
        return false;
    }
    const unsigned height = pk[0];
    if (height > 16 || sig.size() != 4 + 2 * kLamportBits * kDigestBytes + height * kDigestBytes) {
        return false;
    }
    ByteReader r(sig);
    const std::uint32_t leaf = r.u32();
    if (leaf >= (1u << height)) {
        return false;
    }
    auto digest = sha256(message);
    std::vector<Bytes> revealed_pk(kLamportBits);
    for (std::uint32_t j = 0; j < kLamportBits; j++) {
        revealed_pk[j] = sha256(r.raw(kDigestBytes));
    }
    Bytes all;
    all.reserve(2 * kLamportBits * kDigestBytes);
    for (std::uint32_t j = 0; j < kLamportBits; j++) {
        auto other = r.raw(kDigestBytes);
        const bool bit = digest_bit(digest, j);
        ByteView zero = bit ? other : ByteView(revealed_pk[j]);
        ByteView one = bit ? ByteView(revealed_pk[j]) : other;
        all.insert(all.end(), zero.begin(), zero.end());
        all.insert(all.end(), one.begin(), one.end());
    }
    Bytes node = sha256(all);
    std::uint32_t index = leaf;
    for (unsigned h = 0; h < height; h++) {
        auto sibling = r.raw(kDigestBytes);
        node = (index & 1) ? node_hash(sibling, node) : node_hash(node, sibling);
        index >>= 1;
    }
    return CRYPTO_memcmp(node.data(), pk.data() + 1, kDigestBytes) == 0;
}

}  // namespace

Bytes sha256(ByteView data) {
    Bytes out(kDigestBytes);
    SHA256(data.data(), data.size(), out.data());
    return out;
}

HashScheme::HashScheme(std::size_t output_bits) : bits_(output_bits) {
    if (output_bits == 0 || output_bits > 256) {
        throw std::invalid_argument("hash output length must be in [1, 256]");
    }
}

HashScheme HashScheme::toy(std::size_t output_bits) {
    if (output_bits > 16) {
        throw std::invalid_argument("toy hashes are at most 16 bits");
    }
    return HashScheme(output_bits);
}

Bytes HashScheme::index(unsigned kappa, Rng &rng) const {
    if (kappa == 0 || kappa > 0xFFFF) {
        throw std::invalid_argument("kappa out of range");
    }
    ByteWriter w;
    w.u16(static_cast<std::uint16_t>(kappa));
    w.raw(rng.bytes(kIndexSaltBytes));
    return w.take();
}

unsigned HashScheme::kappa_of(ByteView s) {
    if (s.size() != 2 + kIndexSaltBytes) {
        throw std::invalid_argument("malformed hash index");
    }
    return static_cast<unsigned>((s[0] << 8) | s[1]);
}

std::vector<bool> HashScheme::eval(ByteView s, ByteView message) const {
    auto digest = hash_concat({s, message});
    std::vector<bool> out(bits_);
    for (std::size_t j = 0; j < bits_; j++) {
        out[j] = digest_bit(digest, j);
    }
    return out;
}

DsKeyPair ds_keypair_from_seed(DsAlgorithm algorithm, ByteView seed, unsigned merkle_height) {
    if (seed.size() != 32) {
        throw std::invalid_argument("signature key seed must be 32 bytes");
    }
    DsKeyPair kp;
    kp.pk.algorithm = algorithm;
    kp.sk.algorithm = algorithm;
    kp.sk.seed.assign(seed.begin(), seed.end());
    switch (algorithm) {
        case DsAlgorithm::ed25519:
            kp.pk.encoded = ed25519_public_bytes(seed);
            break;
        case DsAlgorithm::merkle_lamport: {
            kp.sk.merkle_height = merkle_height;
            kp.sk.tree = build_tree(seed, merkle_height);
            kp.pk.encoded.push_back(static_cast<std::uint8_t>(merkle_height));
            const auto &root = kp.sk.tree->levels[merkle_height][0];
            kp.pk.encoded.insert(kp.pk.encoded.end(), root.begin(), root.end());
            break;
        }
        default:
            throw std::invalid_argument("unknown signature algorithm");
    }
    return kp;
}

DsKeyPair ds_keygen(DsAlgorithm algorithm, Rng &rng, unsigned merkle_height) {
    auto seed = rng.bytes(32);
    return ds_keypair_from_seed(algorithm, seed, merkle_height);
}

Bytes ds_sign(DsSecretKey &sk, ByteView message) {
    switch (sk.algorithm) {
        case DsAlgorithm::ed25519:
            return ed25519_sign(sk.seed, message);
        case DsAlgorithm::merkle_lamport:
            return merkle_sign(sk, message);
    }
    throw std::invalid_argument("unknown signature algorithm");
}

bool ds_verify(const DsPublicKey &pk, ByteView message, ByteView signature) {
    switch (pk.algorithm) {
        case DsAlgorithm::ed25519:
            return ed25519_verify(pk.encoded, message, signature);
        case DsAlgorithm::merkle_lamport:
            return merkle_verify(pk.encoded, message, signature);
    }
    return false;
}

Bytes mac_keygen(Rng &rng) {
    return rng.bytes(32);
}

Bytes mac_sign(ByteView key, ByteView message) {
    Bytes tag(kDigestBytes);
    unsigned len = 0;
    if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(), message.size(), tag.data(),
             &len) == nullptr ||
        len != kDigestBytes) {
        throw std::runtime_error("HMAC failed");
    }
    return tag;
}

bool mac_verify(ByteView key, ByteView message, ByteView tag) {
    if (tag.size() != kDigestBytes) {
        return false;
    }
    auto expected = mac_sign(key, message);
    return CRYPTO_memcmp(expected.data(), tag.data(), kDigestBytes) == 0;
}

Bytes enc_keygen(Rng &rng) {
    return rng.bytes(32);
}

Bytes encrypt(ByteView key, ByteView plaintext, Rng &rng) {
    if (key.size() != 32) {
        throw std::invalid_argument("encryption key must be 32 bytes");
    }
    Bytes out = rng.bytes(kGcmNonceBytes);
    out.resize(kGcmNonceBytes + plaintext.size() + kGcmTagBytes);
    CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
    int len = 0;
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), out.data()) != 1 ||
        EVP_EncryptUpdate(ctx.get(), out.data() + kGcmNonceBytes, &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1 ||
        EVP_EncryptFinal_ex(ctx.get(), out.data() + kGcmNonceBytes + len, &len) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kGcmTagBytes,
                            out.data() + kGcmNonceBytes + plaintext.size()) != 1) {
        throw std::runtime_error("AES-GCM encryption failed");
    }
    return out;
}

std::optional<Bytes> decrypt(ByteView key, ByteView ciphertext) {
    if (key.size() != 32 || ciphertext.size() < kGcmNonceBytes + kGcmTagBytes) {
        return std::nullopt;
    }
    const std::size_t body = ciphertext.size() - kGcmNonceBytes - kGcmTagBytes;
    Bytes plain(body);
    Bytes tag(ciphertext.end() - kGcmTagBytes, ciphertext.end());
    CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
    int len = 0;
    if (!ctx || EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), ciphertext.data()) != 1 ||
        EVP_DecryptUpdate(ctx.get(), plain.data(), &len, ciphertext.data() + kGcmNonceBytes,
                          static_cast<int>(body)) != 1 ||
        EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kGcmTagBytes, tag.data()) != 1 ||
        EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &len) != 1) {
        return std::nullopt;
    }
    return plain;
}

}  // namespace qtsl::prim
