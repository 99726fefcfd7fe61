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

#ifndef QTSL_CODEC_HPP
#define QTSL_CODEC_HPP

#include <string>
#include <string_view>

#include "qtsl/bytes.hpp"
#include "qtsl/games.hpp"
#include "qtsl/money.hpp"
#include "qtsl/privts.hpp"
#include "qtsl/stack.hpp"

/// Canonical text containers.
///
///     {"kind":K,"magic":"QTSL","payload":{...},"secrecy":S,"version":1}
///
/// Keys are sorted and there is no whitespace. Bit fields with n <= 64 are
/// '0'/'1' strings, coordinate 0 first; longer ones are {"bits":n,"hex":h}
/// with the bits packed MSB-first. Decoding is strict: anything that would
/// not re-encode to the same bytes is a DecodeError.
namespace qtsl::codec {

enum class Kind { TsPk, TsSk, Token, Signature, Check, Coin, PrivKey, Report };
enum class Secrecy { Public, Secret, SimulationSecret };

inline constexpr int kVersion = 1;

std::string_view to_string(Kind kind);
std::string_view to_string(Secrecy secrecy);
Secrecy secrecy_of(Kind kind);

/// Validates the envelope and returns its kind.
Kind peek_kind(std::string_view text);

std::string encode(const stack::TsPublicKey &pk);
std::string encode(const stack::TsSecretKey &sk);
/// Token states are SIMULATION_SECRET: no real device could write them out.
std::string encode(const stack::TsToken &token);
std::string encode(const stack::TsSignature &sig);
std::string encode(const money::Check &check);
std::string encode(const money::Coin &coin);
std::string encode(const privts::TmKey &key);
std::string encode(const games::GameReport &report);

stack::TsPublicKey decode_ts_pk(std::string_view text);
stack::TsSecretKey decode_ts_sk(std::string_view text);
stack::TsToken decode_token(std::string_view text);
stack::TsSignature decode_signature(std::string_view text);
money::Check decode_check(std::string_view text);
money::Coin decode_coin(std::string_view text);
privts::TmKey decode_priv_key(std::string_view text);
games::GameReport decode_report(std::string_view text);

/// JSON text of a bit field, e.g. "0011".
std::string encode_bits(const f2::F2Vector &v);
f2::F2Vector decode_bits(std::string_view json_text);
/// JSON array of canonical basis rows.
std::string encode_subspace(const f2::Subspace &s);
f2::Subspace decode_subspace(std::string_view json_text, std::size_t n);

/// Re-encodes any container after decoding it through its typed reader.
std::string reencode(std::string_view text);

}  // namespace qtsl::codec

#endif
