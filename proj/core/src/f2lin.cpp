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

#include "qtsl/f2lin.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qtsl::f2 {

namespace {

std::size_t word_count(std::size_t n) {
    return (n + 63) / 64;
}

std::uint64_t reverse_bits(std::uint64_t x) {
    x = ((x >> 1) & 0x5555555555555555ULL) | ((x & 0x5555555555555555ULL) << 1);
    x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
    x = ((x >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((x & 0x0F0F0F0F0F0F0F0FULL) << 4);
    x = ((x >> 8) & 0x00FF00FF00FF00FFULL) | ((x & 0x00FF00FF00FF00FFULL) << 8);
    x = ((x >> 16) & 0x0000FFFF0000FFFFULL) | ((x & 0x0000FFFF0000FFFFULL) << 16);
    return (x >> 32) | (x << 32);
}

void require_same_size(const F2Vector &u, const F2Vector &v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument(
            "F2 vector length mismatch: " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
}

}  // namespace

F2Vector::F2Vector(std::size_t n) : n_(n), words_(word_count(n), 0) {
}

F2Vector F2Vector::from_string(std::string_view bits) {
    F2Vector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            v.flip(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("F2 vector text must contain only '0' and '1'");
        }
    }
    return v;
}

F2Vector F2Vector::from_index(std::uint64_t index, std::size_t n) {
    if (n > 64) {
        throw std::invalid_argument("from_index supports n <= 64");
    }
    F2Vector v(n);
    for (std::size_t i = 0; i < n; i++) {
        if ((index >> (n - 1 - i)) & 1) {
            v.flip(i);
        }
    }
    return v;
}

F2Vector F2Vector::unit(std::size_t n, std::size_t coordinate) {
    if (coordinate >= n) {
        throw std::out_of_range("unit vector coordinate out of range");
    }
    F2Vector v(n);
    v.flip(coordinate);
    return v;
}

F2Vector F2Vector::random(std::size_t n, Rng &rng) {
    F2Vector v(n);
    for (auto &w : v.words_) {
        w = rng.next_u64();
    }
    if (n % 64 != 0 && !v.words_.empty()) {
        v.words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
    }
    return v;
}

void F2Vector::set(std::size_t i, bool value) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

bool F2Vector::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t F2Vector::weight() const {
    std::size_t total = 0;
    for (auto w : words_) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

std::optional<std::size_t> F2Vector::leading() const {
    for (std::size_t k = 0; k < words_.size(); k++) {
        if (words_[k] != 0) {
            return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
        }
    }
    return std::nullopt;
}

std::uint64_t F2Vector::to_index() const {
    if (n_ > 64) {
        throw std::invalid_argument("to_index supports n <= 64");
    }
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < n_; i++) {
        index = (index << 1) | (get(i) ? 1 : 0);
    }
    return index;
}

std::string F2Vector::to_string() const {
    std::string out(n_, '0');
    for (std::size_t i = 0; i < n_; i++) {
        if (get(i)) {
            out[i] = '1';
        }
    }
    return out;
}

F2Vector &F2Vector::operator^=(const F2Vector &other) {
    require_same_size(*this, other);
    for (std::size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

std::strong_ordering F2Vector::operator<=>(const F2Vector &other) const {
    if (auto c = n_ <=> other.n_; c != 0) {
        return c;
    }
    for (std::size_t k = 0; k < words_.size(); k++) {
        if (words_[k] != other.words_[k]) {
            // Textual order: coordinate 0 is the most significant character.
            return reverse_bits(words_[k]) <=> reverse_bits(other.words_[k]);
        }
    }
    return std::strong_ordering::equal;
}

F2Vector xor_add(const F2Vector &u, const F2Vector &v) {
    return u ^ v;
}

bool dot(const F2Vector &u, const F2Vector &v) {
    require_same_size(u, v);
    std::uint64_t acc = 0;
    auto a = u.words();
    auto b = v.words();
    for (std::size_t k = 0; k < a.size(); k++) {
        acc ^= a[k] & b[k];
    }
    return (std::popcount(acc) & 1) != 0;
}

Subspace Subspace::zero(std::size_t n) {
    return canonicalize(std::span<const F2Vector>{}, n);
}

Subspace Subspace::full(std::size_t n) {
    std::vector<F2Vector> units;
    units.reserve(n);
    for (std::size_t i = 0; i < n; i++) {
        units.push_back(F2Vector::unit(n, i));
    }
    return canonicalize(units, n);
}

bool Subspace::contains(const F2Vector &v) const {
    if (v.size() != n_) {
        throw std::invalid_argument("membership test: vector length does not match ambient dimension");
    }
    F2Vector r = v;
    for (std::size_t i = 0; i < basis_.size(); i++) {
        if (r.get(pivots_[i])) {
            r ^= basis_[i];
        }
    }
    return r.is_zero();
}

F2Vector Subspace::combination(std::uint64_t mask) const {
    F2Vector v(n_);
    for (std::size_t i = 0; i < basis_.size(); i++) {
        if ((mask >> i) & 1) {
            v ^= basis_[i];
        }
    }
    return v;
}

std::vector<F2Vector> Subspace::elements() const {
    if (dim() > 24) {
        throw std::length_error("refusing to enumerate a subspace of dimension > 24");
    }
    std::vector<F2Vector> out;
    out.reserve(std::size_t{1} << dim());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim()); mask++) {
        out.push_back(combination(mask));
    }
    return out;
}

std::string Subspace::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < basis_.size(); i++) {
        if (i) {
            out += '\n';
        }
        out += basis_[i].to_string();
    }
    return out;
}

Subspace Subspace::from_string(std::string_view text, std::size_t n) {
    std::vector<F2Vector> rows;
    while (!text.empty()) {
        auto cut = text.find('\n');
        auto line = text.substr(0, cut);
        if (!line.empty()) {
            auto v = F2Vector::from_string(line);
            if (v.size() != n) {
                throw std::invalid_argument("subspace row length does not match ambient dimension");
            }
            rows.push_back(std::move(v));
        }
        if (cut == std::string_view::npos) {
            break;
        }
        text.remove_prefix(cut + 1);
    }
    return canonicalize(rows, n);
}

std::strong_ordering Subspace::operator<=>(const Subspace &other) const {
    if (auto c = n_ <=> other.n_; c != 0) {
        return c;
    }
    return std::lexicographical_compare_three_way(
        basis_.begin(), basis_.end(), other.basis_.begin(), other.basis_.end());
}

Subspace canonicalize(std::span<const F2Vector> vectors, std::size_t n) {
    std::vector<F2Vector> rows;
    rows.reserve(vectors.size());
    for (const auto &v : vectors) {
        if (v.size() != n) {
            throw std::invalid_argument("canonicalize: vector length does not match ambient dimension");
        }
        if (!v.is_zero()) {
            rows.push_back(v);
        }
    }

    Subspace result;
    result.n_ = n;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows.size(); col++) {
        std::size_t found = rank;
        while (found < rows.size() && !rows[found].get(col)) {
            found++;
        }
        if (found == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[found]);
        for (std::size_t r = 0; r < rows.size(); r++) {
            if (r != rank && rows[r].get(col)) {
                rows[r] ^= rows[rank];
            }
        }
        result.pivots_.push_back(col);
        rank++;
    }
    rows.resize(rank);
    result.basis_ = std::move(rows);
    return result;
}

Subspace canonicalize(std::initializer_list<F2Vector> vectors, std::size_t n) {
    return canonicalize(std::span<const F2Vector>(vectors.begin(), vectors.size()), n);
}

Subspace dual(const Subspace &a) {
    const std::size_t n = a.ambient_dim();
    const auto &pivots = a.pivots();
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<F2Vector> generators;
    generators.reserve(n - a.dim());
    for (std::size_t f = 0; f < n; f++) {
        if (is_pivot[f]) {
            continue;
        }
        F2Vector x = F2Vector::unit(n, f);
        for (std::size_t i = 0; i < a.dim(); i++) {
            if (a.basis()[i].get(f)) {
                x.flip(pivots[i]);
            }
        }
        generators.push_back(std::move(x));
    }
    return canonicalize(generators, n);
}

bool member(const Subspace &a, const F2Vector &v) {
    return a.contains(v);
}

bool chi_star(const Subspace &a, const F2Vector &v, bool p) {
    if (!p) {
        return a.contains(v);
    }
    if (v.size() != a.ambient_dim()) {
        throw std::invalid_argument("chi_star: vector length does not match ambient dimension");
    }
    // v is in the dual iff it is orthogonal to every basis row.
    for (const auto &row : a.basis()) {
        if (dot(row, v)) {
            return false;
        }
    }
    return true;
}

std::size_t rank(std::span<const F2Vector> vectors) {
    if (vectors.empty()) {
        return 0;
    }
    return canonicalize(vectors, vectors.front().size()).dim();
}

Subspace sum(const Subspace &a, const Subspace &b) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw std::invalid_argument("subspace ambient dimensions differ");
    }
    std::vector<F2Vector> all = a.basis();
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    return canonicalize(all, a.ambient_dim());
}

std::size_t intersection_dim(const Subspace &a, const Subspace &b) {
    return a.dim() + b.dim() - sum(a, b).dim();
}

Subspace intersection(const Subspace &a, const Subspace &b) {
    return dual(sum(dual(a), dual(b)));
}

Subspace sample_subspace_of_dim(std::size_t n, std::size_t k, Rng &rng) {
    if (k > n) {
        throw std::invalid_argument("subspace dimension exceeds ambient dimension");
    }
    std::vector<F2Vector> rows(k);
    while (true) {
        for (auto &row : rows) {
            row = F2Vector::random(n, rng);
        }
        auto s = canonicalize(rows, n);
        if (s.dim() == k) {
            return s;
        }
    }
}

Subspace sample_subspace(std::size_t n, Rng &rng) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("sample_subspace: n must be even and >= 2, got " + std::to_string(n));
    }
    return sample_subspace_of_dim(n, n / 2, rng);
}

F2Vector sample_element(const Subspace &a, Rng &rng) {
    F2Vector v(a.ambient_dim());
    for (const auto &row : a.basis()) {
        if (rng.next_bit()) {
            v ^= row;
        }
    }
    return v;
}

Subspace sample_related(const Subspace &a, Rng &rng) {
    const std::size_t n = a.ambient_dim();
    const std::size_t k = a.dim();
    if (n % 2 != 0 || k != n / 2 || k == 0) {
        throw std::invalid_argument("sample_related: requires dim(A) = n/2 >= 1");
    }
    // Random basis of A: an invertible k x k change of basis applied to the
    // canonical rows.
    InvertibleMap change = random_invertible(k, rng);
    std::vector<F2Vector> rows;
    rows.reserve(k);
    for (std::size_t i = 0; i + 1 < k; i++) {
        F2Vector row(n);
        for (std::size_t j = 0; j < k; j++) {
            if (change.rows()[i].get(j)) {
                row ^= a.basis()[j];
            }
        }
        rows.push_back(std::move(row));
    }
    F2Vector outside(n);
    do {
        outside = F2Vector::random(n, rng);
    } while (a.contains(outside));
    rows.push_back(std::move(outside));
    return canonicalize(rows, n);
}

std::vector<Subspace> enumerate_subspaces(std::size_t n, std::size_t k) {
    if (k > n || n > 16) {
        throw std::invalid_argument("enumerate_subspaces: need k <= n <= 16");
    }
    std::vector<Subspace> out;
    // Walk every pivot set; the non-pivot entries to the right of each pivot
    // are free, which yields each RREF matrix exactly once.
    for (std::uint32_t pivot_mask = 0; pivot_mask < (1u << n); pivot_mask++) {
        if (static_cast<std::size_t>(std::popcount(pivot_mask)) != k) {
            continue;
        }
        std::vector<std::size_t> pivots;
        for (std::size_t c = 0; c < n; c++) {
            if ((pivot_mask >> c) & 1) {
                pivots.push_back(c);
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> free_slots;
        for (std::size_t i = 0; i < k; i++) {
            for (std::size_t c = pivots[i] + 1; c < n; c++) {
                if (!((pivot_mask >> c) & 1)) {
                    free_slots.emplace_back(i, c);
                }
            }
        }
        for (std::uint64_t fill = 0; fill < (std::uint64_t{1} << free_slots.size()); fill++) {
            std::vector<F2Vector> rows;
            rows.reserve(k);
            for (std::size_t i = 0; i < k; i++) {
                rows.push_back(F2Vector::unit(n, pivots[i]));
            }
            for (std::size_t s = 0; s < free_slots.size(); s++) {
                if ((fill >> s) & 1) {
                    rows[free_slots[s].first].flip(free_slots[s].second);
                }
            }
            out.push_back(canonicalize(rows, n));
        }
    }
    return out;
}

BigInt gaussian_binomial(unsigned m, unsigned k) {
    if (k > m) {
        throw std::out_of_range("gaussian_binomial: need 0 <= k <= m");
    }
    BigInt numerator = 1;
    BigInt denominator = 1;
    for (unsigned i = 0; i < k; i++) {
        numerator *= (BigInt(1) << (m - i)) - 1;
        denominator *= (BigInt(1) << (k - i)) - 1;
    }
    return numerator / denominator;
}

InvertibleMap InvertibleMap::identity(std::size_t n) {
    std::vector<F2Vector> rows;
    for (std::size_t i = 0; i < n; i++) {
        rows.push_back(F2Vector::unit(n, i));
    }
    return InvertibleMap(rows, rows);
}

InvertibleMap InvertibleMap::from_rows(std::vector<F2Vector> rows) {
    const std::size_t n = rows.size();
    for (const auto &r : rows) {
        if (r.size() != n) {
            throw std::invalid_argument("invertible map must be square");
        }
    }
    // Gauss-Jordan on [M | I].
    std::vector<F2Vector> left = rows;
    std::vector<F2Vector> right;
    right.reserve(n);
    for (std::size_t i = 0; i < n; i++) {
        right.push_back(F2Vector::unit(n, i));
    }
    for (std::size_t col = 0; col < n; col++) {
        std::size_t found = col;
        while (found < n && !left[found].get(col)) {
            found++;
        }
        if (found == n) {
            throw std::invalid_argument("matrix is singular over F2");
        }
        std::swap(left[col], left[found]);
        std::swap(right[col], right[found]);
        for (std::size_t r = 0; r < n; r++) {
            if (r != col && left[r].get(col)) {
                left[r] ^= left[col];
                right[r] ^= right[col];
            }
        }
    }
    return InvertibleMap(std::move(rows), std::move(right));
}

F2Vector InvertibleMap::apply(const F2Vector &v) const {
    if (v.size() != rows_.size()) {
        throw std::invalid_argument("apply_map: vector length does not match map size");
    }
    F2Vector out(v.size());
    for (std::size_t i = 0; i < rows_.size(); i++) {
        if (dot(rows_[i], v)) {
            out.flip(i);
        }
    }
    return out;
}

InvertibleMap random_invertible(std::size_t n, Rng &rng) {
    if (n == 0) {
        throw std::invalid_argument("random_invertible: n must be >= 1");
    }
    while (true) {
        std::vector<F2Vector> rows;
        rows.reserve(n);
        for (std::size_t i = 0; i < n; i++) {
            rows.push_back(F2Vector::random(n, rng));
        }
        if (rank(rows) == n) {
            return InvertibleMap::from_rows(std::move(rows));
        }
    }
}

F2Vector apply_map(const InvertibleMap &f, const F2Vector &v) {
    return f.apply(v);
}

Subspace image(const InvertibleMap &f, const Subspace &a) {
    if (f.size() != a.ambient_dim()) {
        throw std::invalid_argument("image: map size does not match ambient dimension");
    }
    std::vector<F2Vector> rows;
    rows.reserve(a.dim());
    for (const auto &b : a.basis()) {
        rows.push_back(f.apply(b));
    }
    return canonicalize(rows, a.ambient_dim());
}

}  // namespace qtsl::f2
