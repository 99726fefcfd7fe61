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

#ifndef QTSL_PRIMITIVES_HPP
#define QTSL_PRIMITIVES_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qtsl/bytes.hpp"
#include "qtsl/rng.hpp"

namespace qtsl::prim {

Bytes sha256(ByteView data);

/// Keyed collision-resistant hashing scheme {h_s}.
///
/// h_s(x) is the first `output_bits` bits of SHA-256(s || x). The reference
/// instantiation keeps all 256 bits; toy instantiations truncate to 8 or 16
/// bits so that collisions are reachable by brute force.
class HashScheme {
   public:
    explicit HashScheme(std::size_t output_bits);
    static HashScheme reference() {
        return HashScheme(256);
    }
    static HashScheme toy(std::size_t output_bits);

    std::size_t output_bits() const {
        return bits_;
    }

    /// Index s = (kappa as u16 big-endian) || 16 random bytes.
    Bytes index(unsigned kappa, Rng &rng) const;
    /// Recovers kappa from an index; throws on a malformed index.
    static unsigned kappa_of(ByteView s);

    std::vector<bool> eval(ByteView s, ByteView message) const;

   private:
    std::size_t bits_;
};

enum class DsAlgorithm : std::uint8_t {
    /// Ed25519 through OpenSSL.
    ed25519 = 1,
    /// Lamport one-time keys under a Merkle tree; stateful, hash-based.
    merkle_lamport = 2,
};

struct DsPublicKey {
    DsAlgorithm algorithm = DsAlgorithm::ed25519;
    Bytes encoded;
    bool operator==(const DsPublicKey &) const = default;
};

struct MerkleTree;

/// Signing key. Merkle-Lamport keys are stateful: ds_sign advances
/// `next_leaf`, and copies of a key share nothing but the cached tree, so
/// signing from two copies reuses leaves.
struct DsSecretKey {
    DsAlgorithm algorithm = DsAlgorithm::ed25519;
    Bytes seed;
    unsigned merkle_height = 0;
    std::uint32_t next_leaf = 0;
    std::shared_ptr<const MerkleTree> tree;
};

struct DsKeyPair {
    DsPublicKey pk;
    DsSecretKey sk;
};

DsKeyPair ds_keygen(DsAlgorithm algorithm, Rng &rng, unsigned merkle_height = 5);
/// Rebuilds a key pair from its seed (used when reloading secret keys).
DsKeyPair ds_keypair_from_seed(DsAlgorithm algorithm, ByteView seed, unsigned merkle_height = 5);
/// Throws std::runtime_error when a Merkle-Lamport key has no leaves left.
Bytes ds_sign(DsSecretKey &sk, ByteView message);
/// Pure and deterministic; malformed keys or signatures yield false.
bool ds_verify(const DsPublicKey &pk, ByteView message, ByteView signature);

/// HMAC-SHA256.
Bytes mac_keygen(Rng &rng);
Bytes mac_sign(ByteView key, ByteView message);
bool mac_verify(ByteView key, ByteView message, ByteView tag);

/// AES-256-GCM; ciphertext = nonce(12) || body || tag(16).
Bytes enc_keygen(Rng &rng);
Bytes encrypt(ByteView key, ByteView plaintext, Rng &rng);
std::optional<Bytes> decrypt(ByteView key, ByteView ciphertext);

}  // namespace qtsl::prim

#endif
