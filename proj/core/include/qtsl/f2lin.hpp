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

#ifndef QTSL_F2LIN_HPP
#define QTSL_F2LIN_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qtsl/rng.hpp"

namespace qtsl::f2 {

/// A vector in F_2^n.
///
/// Coordinates are numbered 0..n-1 internally; coordinate 0 is the leftmost
/// character of the textual form, so "0011" has coordinates 2 and 3 set.
/// `to_index` maps coordinate 0 to the most significant bit, which makes the
/// textual form read as the binary numeral of the index.
class F2Vector {
   public:
    F2Vector() = default;
    explicit F2Vector(std::size_t n);

    static F2Vector from_string(std::string_view bits);
    static F2Vector from_index(std::uint64_t index, std::size_t n);
    static F2Vector unit(std::size_t n, std::size_t coordinate);
    static F2Vector random(std::size_t n, Rng &rng);

    std::size_t size() const {
        return n_;
    }
    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(std::size_t i, bool value);
    void flip(std::size_t i) {
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }
    bool is_zero() const;
    std::size_t weight() const;
    /// Smallest set coordinate, if any.
    std::optional<std::size_t> leading() const;

    std::uint64_t to_index() const;
    std::string to_string() const;

    F2Vector &operator^=(const F2Vector &other);
    friend F2Vector operator^(F2Vector a, const F2Vector &b) {
        a ^= b;
        return a;
    }
    bool operator==(const F2Vector &other) const = default;
    std::strong_ordering operator<=>(const F2Vector &other) const;

    std::span<const std::uint64_t> words() const {
        return words_;
    }

   private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

F2Vector xor_add(const F2Vector &u, const F2Vector &v);
bool dot(const F2Vector &u, const F2Vector &v);

/// A linear subspace of F_2^n held as its reduced row-echelon basis.
///
/// Rows are sorted by pivot and every pivot column is zero outside its own
/// row, so two Subspace values compare equal exactly when they contain the
/// same vectors.
class Subspace {
   public:
    Subspace() = default;

    static Subspace zero(std::size_t n);
    static Subspace full(std::size_t n);

    std::size_t ambient_dim() const {
        return n_;
    }
    std::size_t dim() const {
        return basis_.size();
    }
    const std::vector<F2Vector> &basis() const {
        return basis_;
    }
    const std::vector<std::size_t> &pivots() const {
        return pivots_;
    }

    bool contains(const F2Vector &v) const;
    /// All 2^dim elements, in the order of the binary counter over the basis.
    std::vector<F2Vector> elements() const;
    /// Element selected by the low `dim` bits of `mask`.
    F2Vector combination(std::uint64_t mask) const;

    std::string to_string() const;
    static Subspace from_string(std::string_view text, std::size_t n);

    bool operator==(const Subspace &other) const = default;
    std::strong_ordering operator<=>(const Subspace &other) const;

   private:
    friend Subspace canonicalize(std::span<const F2Vector> vectors, std::size_t n);
    std::size_t n_ = 0;
    std::vector<F2Vector> basis_;
    std::vector<std::size_t> pivots_;
};

/// Row-reduce a spanning set. `n` is the ambient dimension (needed when
/// `vectors` is empty).
Subspace canonicalize(std::span<const F2Vector> vectors, std::size_t n);
Subspace canonicalize(std::initializer_list<F2Vector> vectors, std::size_t n);

Subspace dual(const Subspace &a);
bool member(const Subspace &a, const F2Vector &v);
/// Unified membership predicate: p=0 asks about A, p=1 about its dual.
bool chi_star(const Subspace &a, const F2Vector &v, bool p);

std::size_t rank(std::span<const F2Vector> vectors);
std::size_t intersection_dim(const Subspace &a, const Subspace &b);
Subspace intersection(const Subspace &a, const Subspace &b);
Subspace sum(const Subspace &a, const Subspace &b);

Subspace sample_subspace(std::size_t n, Rng &rng);
Subspace sample_subspace_of_dim(std::size_t n, std::size_t k, Rng &rng);
F2Vector sample_element(const Subspace &a, Rng &rng);
/// Uniform B with dim(A ∩ B) = dim(A) - 1 and dim(B) = dim(A) = n/2.
Subspace sample_related(const Subspace &a, Rng &rng);

/// Every k-dimensional subspace of F_2^n, generated from the RREF shapes.
std::vector<Subspace> enumerate_subspaces(std::size_t n, std::size_t k);

using BigInt = boost::multiprecision::cpp_int;
/// Number of k-dimensional subspaces of F_2^m.
BigInt gaussian_binomial(unsigned m, unsigned k);

/// An invertible linear map on F_2^n with its cached inverse.
class InvertibleMap {
   public:
    static InvertibleMap identity(std::size_t n);
    /// Throws std::invalid_argument when `rows` is singular.
    static InvertibleMap from_rows(std::vector<F2Vector> rows);

    std::size_t size() const {
        return rows_.size();
    }
    const std::vector<F2Vector> &rows() const {
        return rows_;
    }
    InvertibleMap inverse() const {
        return InvertibleMap(inverse_rows_, rows_);
    }
    F2Vector apply(const F2Vector &v) const;

   private:
    InvertibleMap(std::vector<F2Vector> rows, std::vector<F2Vector> inverse_rows)
        : rows_(std::move(rows)), inverse_rows_(std::move(inverse_rows)) {
    }
    std::vector<F2Vector> rows_;
    std::vector<F2Vector> inverse_rows_;
};

InvertibleMap random_invertible(std::size_t n, Rng &rng);
F2Vector apply_map(const InvertibleMap &f, const F2Vector &v);
Subspace image(const InvertibleMap &f, const Subspace &a);

}  // namespace qtsl::f2

#endif
