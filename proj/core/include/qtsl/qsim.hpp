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

#ifndef QTSL_QSIM_HPP
#define QTSL_QSIM_HPP

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "qtsl/f2lin.hpp"
#include "qtsl/rng.hpp"

namespace qtsl::qsim {

using f2::F2Vector;
using f2::Subspace;

/// |S>: uniform superposition over the elements of S.
struct SubspaceState {
    Subspace space;
    bool operator==(const SubspaceState &) const = default;
};
/// |v>: a standard basis state.
struct BasisState {
    F2Vector v;
    bool operator==(const BasisState &) const = default;
};
/// H^n |v>: uniform magnitudes with phase (-1)^{v.y}. Global phase is dropped.
struct PhaseState {
    F2Vector v;
    bool operator==(const PhaseState &) const = default;
};
/// A state outside the coset family (e.g. the residual after a rejected
/// projection). No further operation is simulated on it.
struct Unsupported {
    bool operator==(const Unsupported &) const = default;
};

/// Exact symbolic state covering everything reachable from |A> by global
/// Hadamards, standard-basis measurements and accepted |A><A| projections.
class CosetState {
   public:
    using Variant = std::variant<SubspaceState, BasisState, PhaseState, Unsupported>;

    CosetState(Variant value, std::size_t ambient_n) : value_(std::move(value)), n_(ambient_n) {
    }
    static CosetState unsupported(std::size_t ambient_n) {
        return CosetState(Unsupported{}, ambient_n);
    }

    std::size_t ambient_n() const {
        return n_;
    }
    const Variant &value() const {
        return value_;
    }
    template <class T>
    bool holds() const {
        return std::holds_alternative<T>(value_);
    }
    template <class T>
    const T &get() const {
        return std::get<T>(value_);
    }
    bool is_unsupported() const {
        return holds<Unsupported>();
    }

    bool operator==(const CosetState &) const = default;

   private:
    Variant value_;
    std::size_t n_;
};

struct Measurement {
    F2Vector outcome;
    CosetState post;
};

struct Projection {
    bool accepted;
    CosetState post;
};

CosetState prepare_subspace_state(const Subspace &a);
CosetState hadamard_all(const CosetState &s);
Measurement measure_standard(const CosetState &s, Rng &rng);
/// |<A|s>|^2, computed analytically.
double acceptance_probability(const CosetState &s, const Subspace &a);
/// Two-outcome measurement {|A><A|, I - |A><A|}.
Projection project_subspace(const CosetState &s, const Subspace &a, Rng &rng);

/// Dense state vector over 2^n amplitudes, indexed by F2Vector::to_index.
struct DenseState {
    std::size_t n = 0;
    std::vector<std::complex<double>> amplitudes;

    double norm() const;
    double probability(std::size_t index) const {
        return std::norm(amplitudes[index]);
    }
};

inline constexpr std::size_t kMaxDenseQubits = 12;
inline constexpr double kDenseTolerance = 1e-10;

struct DenseMeasurement {
    F2Vector outcome;
    DenseState post;
};

struct DenseProjection {
    bool accepted;
    DenseState post;
};

DenseState to_dense(const CosetState &s);
DenseState dense_basis(const F2Vector &v);
DenseState dense_hadamard_all(DenseState d);
DenseMeasurement dense_measure(const DenseState &d, Rng &rng);
/// P_A: zero every amplitude outside A. The result is not renormalized.
DenseState dense_apply_subspace_projector(DenseState d, const Subspace &a);
/// H^n P_{A^perp} H^n P_A applied to d (unnormalized).
DenseState dense_apply_verification(const DenseState &d, const Subspace &a);
/// |A><A| applied to d (unnormalized).
DenseState dense_apply_rank_one(const DenseState &d, const Subspace &a);
/// The two-outcome measurement {|A><A|, I - |A><A|}; both routes are
/// evaluated and must agree within kDenseTolerance.
DenseProjection dense_project(const DenseState &d, const Subspace &a, Rng &rng);

/// Largest entrywise |x - y| between two equal-length amplitude vectors.
double max_abs_difference(const DenseState &x, const DenseState &y);

}  // namespace qtsl::qsim

#endif
