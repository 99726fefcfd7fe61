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

#ifndef QTSL_BYTES_HPP
#define QTSL_BYTES_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qtsl {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Malformed serialized data.
class DecodeError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

std::string to_hex(ByteView data);
/// Throws std::invalid_argument on odd length or a non-hex character.
Bytes from_hex(std::string_view hex);

/// Append-only big-endian writer used by the canonical binary encodings.
class ByteWriter {
   public:
    void u8(std::uint8_t v) {
        out_.push_back(v);
    }
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(ByteView data);
    /// u32 length prefix followed by the bytes.
    void blob(ByteView data);
    Bytes take() {
        return std::move(out_);
    }

   private:
    Bytes out_;
};

/// Bounds-checked reader; every accessor throws std::out_of_range on
/// truncated input.
class ByteReader {
   public:
    explicit ByteReader(ByteView data) : data_(data) {
    }
    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    ByteView raw(std::size_t count);
    ByteView blob();
    bool done() const {
        return pos_ == data_.size();
    }

   private:
    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace qtsl

#endif
