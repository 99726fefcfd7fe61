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

#ifndef QTSL_RNG_HPP
#define QTSL_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace qtsl {

/// Seeded, splittable random source.
///
/// Every random choice in the library is drawn from an Rng passed in by the
/// caller. The output stream is a pure function of the seed, and `split`
/// derives independent child streams (one per trial, per branch, ...) so that
/// reordering work never changes results.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {
    }

    std::uint64_t seed() const {
        return seed_;
    }

    std::uint64_t next_u64() {
        return engine_();
    }

    bool next_bit() {
        return (engine_() >> 63) != 0;
    }

    /// Uniform integer in [0, bound). bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::vector<std::uint8_t> bytes(std::size_t count);

    /// Child stream keyed by `index`; independent of how much of this stream
    /// has already been consumed.
    Rng split(std::uint64_t index) const {
        return Rng(mix(seed_ ^ mix(index + 0x9E3779B97F4A7C15ULL)));
    }

    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

   private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

inline std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    // Rejection sampling; std distributions are implementation-defined.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    while (true) {
        std::uint64_t x = engine_();
        if (x < limit) {
            return x % bound;
        }
    }
}

inline std::vector<std::uint8_t> Rng::bytes(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; i++) {
        if (i % 8 == 0) {
            word = engine_();
        }
        out[i] = static_cast<std::uint8_t>(word >> (8 * (i % 8)));
    }
    return out;
}

}  // namespace qtsl

#endif
