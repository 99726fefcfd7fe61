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

#include "qtsl/qsim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtsl::qsim {

namespace {

void require_protocol_subspace(const CosetState &s, const Subspace &a) {
    if (a.ambient_dim() != s.ambient_n()) {
        throw std::invalid_argument("projection subspace lives in a different ambient space");
    }
    if (a.dim() * 2 != a.ambient_dim()) {
        throw std::invalid_argument("projection subspace must have dimension n/2");
    }
}

void require_supported(const CosetState &s, const char *op) {
    if (s.is_unsupported()) {
        throw std::logic_error(std::string(op) + ": state is outside the coset model");
    }
}

void require_dense_size(std::size_t n) {
    if (n > kMaxDenseQubits) {
        throw std::invalid_argument(
            "dense simulation limited to n <= " + std::to_string(kMaxDenseQubits) + ", got " + std::to_string(n));
    }
}

std::vector<bool> membership_table(const Subspace &a) {
    std::vector<bool> table(std::size_t{1} << a.ambient_dim(), false);
    for (const auto &e : a.elements()) {
        table[e.to_index()] = true;
    }
    return table;
}

DenseState subspace_amplitudes(const Subspace &s) {
    DenseState d{s.ambient_dim(), std::vector<std::complex<double>>(std::size_t{1} << s.ambient_dim())};
    const double amp = std::pow(2.0, -0.5 * static_cast<double>(s.dim()));
    for (const auto &e : s.elements()) {
        d.amplitudes[e.to_index()] = amp;
    }
    return d;
}

DenseState normalized(DenseState d) {
    const double nrm = d.norm();
    for (auto &a : d.amplitudes) {
        a /= nrm;
    }
    return d;
}

}  // namespace

CosetState prepare_subspace_state(const Subspace &a) {
    if (a.dim() * 2 != a.ambient_dim()) {
        throw std::invalid_argument(
            "prepare_subspace_state: dim(A) must be n/2, got dim " + std::to_string(a.dim()) + " in n=" +
            std::to_string(a.ambient_dim()));
    }
    return CosetState(SubspaceState{a}, a.ambient_dim());
}

CosetState hadamard_all(const CosetState &s) {
    require_supported(s, "hadamard_all");
    const auto n = s.ambient_n();
    return std::visit(
        [n](const auto &v) -> CosetState {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SubspaceState>) {
                return CosetState(SubspaceState{f2::dual(v.space)}, n);
            } else if constexpr (std::is_same_v<T, BasisState>) {
                return CosetState(PhaseState{v.v}, n);
            } else if constexpr (std::is_same_v<T, PhaseState>) {
                return CosetState(BasisState{v.v}, n);
            } else {
                return CosetState::unsupported(n);
            }
        },
        s.value());
}

Measurement measure_standard(const CosetState &s, Rng &rng) {
    require_supported(s, "measure_standard");
    const auto n = s.ambient_n();
    F2Vector outcome = std::visit(
        [&](const auto &v) -> F2Vector {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SubspaceState>) {
                return f2::sample_element(v.space, rng);
            } else if constexpr (std::is_same_v<T, BasisState>) {
                return v.v;
            } else {
                return F2Vector::random(n, rng);
            }
        },
        s.value());
    CosetState post(BasisState{outcome}, n);
    return Measurement{std::move(outcome), std::move(post)};
}

double acceptance_probability(const CosetState &s, const Subspace &a) {
    require_supported(s, "project_subspace");
    require_protocol_subspace(s, a);
    const auto n = static_cast<double>(s.ambient_n());
    const auto k = static_cast<double>(a.dim());
    return std::visit(
        [&](const auto &v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SubspaceState>) {
                if (v.space == a) {
                    return 1.0;
                }
                const auto d = static_cast<double>(f2::intersection_dim(a, v.space));
                return std::exp2(2 * d - k - static_cast<double>(v.space.dim()));
            } else if constexpr (std::is_same_v<T, BasisState>) {
                return a.contains(v.v) ? std::exp2(-k) : 0.0;
            } else if constexpr (std::is_same_v<T, PhaseState>) {
                return f2::chi_star(a, v.v, true) ? std::exp2(k - n) : 0.0;
            } else {
                return 0.0;
            }
        },
        s.value());
}

Projection project_subspace(const CosetState &s, const Subspace &a, Rng &rng) {
    const double p = acceptance_probability(s, a);
    bool accepted;
    if (p >= 1.0) {
        accepted = true;
    } else if (p <= 0.0) {
        accepted = false;
    } else {
        accepted = rng.uniform01() < p;
    }
    if (accepted) {
        return Projection{true, CosetState(SubspaceState{a}, s.ambient_n())};
    }
    // A state orthogonal to |A> is left untouched by I - |A><A|.
    if (p <= 0.0) {
        return Projection{false, s};
    }
    return Projection{false, CosetState::unsupported(s.ambient_n())};
}

double DenseState::norm() const {
    double total = 0;
    for (const auto &a : amplitudes) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

DenseState to_dense(const CosetState &s) {
    require_supported(s, "to_dense");
    const auto n = s.ambient_n();
    require_dense_size(n);
    return std::visit(
        [n](const auto &v) -> DenseState {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SubspaceState>) {
                return subspace_amplitudes(v.space);
            } else if constexpr (std::is_same_v<T, BasisState>) {
                return dense_basis(v.v);
            } else if constexpr (std::is_same_v<T, PhaseState>) {
                return dense_hadamard_all(dense_basis(v.v));
            } else {
                return DenseState{n, {}};
            }
        },
        s.value());
}

DenseState dense_basis(const F2Vector &v) {
    require_dense_size(v.size());
    DenseState d{v.size(), std::vector<std::complex<double>>(std::size_t{1} << v.size())};
    d.amplitudes[v.to_index()] = 1.0;
    return d;
}

DenseState dense_hadamard_all(DenseState d) {
    require_dense_size(d.n);
    auto &a = d.amplitudes;
    const std::size_t size = a.size();
    for (std::size_t half = 1; half < size; half <<= 1) {
        for (std::size_t i = 0; i < size; i += half << 1) {
            for (std::size_t j = i; j < i + half; j++) {
                auto x = a[j];
                auto y = a[j + half];
                a[j] = x + y;
                a[j + half] = x - y;
            }
        }
    }
    const double scale = std::pow(2.0, -0.5 * static_cast<double>(d.n));
    for (auto &x : a) {
        x *= scale;
    }
    return d;
}

DenseMeasurement dense_measure(const DenseState &d, Rng &rng) {
    require_dense_size(d.n);
    if (std::abs(d.norm() - 1.0) > kDenseTolerance) {
        throw std::invalid_argument("dense_measure: state is not normalized");
    }
    double u = rng.uniform01();
    std::size_t chosen = d.amplitudes.size() - 1;
    double acc = 0;
    for (std::size_t i = 0; i < d.amplitudes.size(); i++) {
        acc += d.probability(i);
        if (u < acc) {
            chosen = i;
            break;
        }
    }
    // Guard against rounding landing on a zero-probability tail entry.
    while (d.probability(chosen) == 0.0 && chosen > 0) {
        chosen--;
    }
    auto outcome = F2Vector::from_index(chosen, d.n);
    return DenseMeasurement{outcome, dense_basis(outcome)};
}

DenseState dense_apply_subspace_projector(DenseState d, const Subspace &a) {
    require_dense_size(d.n);
    if (a.ambient_dim() != d.n) {
        throw std::invalid_argument("projector subspace lives in a different ambient space");
    }
    auto table = membership_table(a);
    for (std::size_t i = 0; i < d.amplitudes.size(); i++) {
        if (!table[i]) {
            d.amplitudes[i] = 0.0;
        }
    }
    return d;
}

DenseState dense_apply_verification(const DenseState &d, const Subspace &a) {
    auto x = dense_apply_subspace_projector(d, a);
    x = dense_hadamard_all(std::move(x));
    x = dense_apply_subspace_projector(std::move(x), f2::dual(a));
    return dense_hadamard_all(std::move(x));
}

DenseState dense_apply_rank_one(const DenseState &d, const Subspace &a) {
    require_dense_size(d.n);
    if (a.ambient_dim() != d.n) {
        throw std::invalid_argument("projector subspace lives in a different ambient space");
    }
    auto ket = subspace_amplitudes(a);
    std::complex<double> overlap = 0;
    for (std::size_t i = 0; i < ket.amplitudes.size(); i++) {
        overlap += std::conj(ket.amplitudes[i]) * d.amplitudes[i];
    }
    for (auto &x : ket.amplitudes) {
        x *= overlap;
    }
    return ket;
}

double max_abs_difference(const DenseState &x, const DenseState &y) {
    if (x.amplitudes.size() != y.amplitudes.size()) {
        throw std::invalid_argument("dense states have different sizes");
    }
    double worst = 0;
    for (std::size_t i = 0; i < x.amplitudes.size(); i++) {
        worst = std::max(worst, std::abs(x.amplitudes[i] - y.amplitudes[i]));
    }
    return worst;
}

DenseProjection dense_project(const DenseState &d, const Subspace &a, Rng &rng) {
    if (a.dim() * 2 != a.ambient_dim()) {
        throw std::invalid_argument("dense_project: subspace must have dimension n/2");
    }
    if (std::abs(d.norm() - 1.0) > kDenseTolerance) {
        throw std::invalid_argument("dense_project: state is not normalized");
    }
    auto two_step = dense_apply_verification(d, a);
    auto rank_one = dense_apply_rank_one(d, a);
    if (max_abs_difference(two_step, rank_one) > kDenseTolerance) {
        throw std::logic_error("dense_project: H P_{A^perp} H P_A disagrees with |A><A|");
    }
    const double p = std::pow(rank_one.norm(), 2);
    const bool accepted = p > 0 && (p >= 1.0 - kDenseTolerance || rng.uniform01() < p);
    if (accepted) {
        return DenseProjection{true, normalized(std::move(rank_one))};
    }
    DenseState residual = d;
    for (std::size_t i = 0; i < residual.amplitudes.size(); i++) {
        residual.amplitudes[i] -= rank_one.amplitudes[i];
    }
    return DenseProjection{false, normalized(std::move(residual))};
}

}  // namespace qtsl::qsim
