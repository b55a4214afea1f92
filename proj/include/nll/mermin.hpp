// Copyright 2026 The nll Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Mermin's two-spin parity argument: ten observables, seven commuting
 * contexts, and the clash between value assignments (CZ = +1 always) and the
 * operator identity CZ = -1.
 */

#pragma once

#include <array>
#include <string>
#include <vector>

#include "spectrum.hpp"
#include "spin.hpp"

namespace nll {

/// Indices into MerminObservables::ops.
enum MerminIndex : std::size_t {
    kS1x = 0, kS1y, kS2x, kS2y, kA, kB, kX, kY, kC, kZ, kMerminCount
};

inline constexpr std::array<const char *, kMerminCount> kMerminLabels{
    "s1x", "s1y", "s2x", "s2y", "A", "B", "X", "Y", "C", "Z"};

/// The ten observables on a 4-dimensional space, ordered as MerminIndex.
/// Particle alpha is the first tensor factor, beta the second.
inline std::array<HermitianOperator, kMerminCount> mermin_observables() {
    const CMatrix id = CMatrix::identity(2);
    const CMatrix s1x = tensor(pauli_x(), id);
    const CMatrix s1y = tensor(pauli_y(), id);
    const CMatrix s2x = tensor(id, pauli_x());
    const CMatrix s2y = tensor(id, pauli_y());
    const CMatrix a = s1x * s2y;
    const CMatrix b = s1y * s2x;
    const CMatrix x = s1x * s2x;
    const CMatrix y = s1y * s2y;
    const CMatrix c = a * b;
    const CMatrix z = x * y;
    const std::array<CMatrix, kMerminCount> m{s1x, s1y, s2x, s2y, a,
                                              b,   x,   y,   c,   z};
    std::array<HermitianOperator, kMerminCount> out;
    for (std::size_t i = 0; i < kMerminCount; ++i) {
        out[i] = HermitianOperator(m[i], kMerminLabels[i]);
    }
    return out;
}

/// A context: members (as MerminIndex) with the first one defined by the
/// product of the rest (or, for {C, Z}, by C = -Z).
struct MerminContext {
    std::vector<std::size_t> members;
    std::string relation;
};

inline const std::array<MerminContext, 7> &mermin_contexts() {
    static const std::array<MerminContext, 7> ctx{{
        {{kA, kS1x, kS2y}, "A = s1x s2y"},
        {{kB, kS1y, kS2x}, "B = s1y s2x"},
        {{kX, kS1x, kS2x}, "X = s1x s2x"},
        {{kY, kS1y, kS2y}, "Y = s1y s2y"},
        {{kC, kA, kB}, "C = A B"},
        {{kZ, kX, kY}, "Z = X Y"},
        {{kC, kZ}, "C Z = -1"},
    }};
    return ctx;
}

/**
 * @brief Builds the commuting set for one context from arbitrary
 * (possibly embedded) representatives of the ten observables.
 *
 * The derivation expresses the first member through the others; the
 * relation is its residual.
 */
inline CommutingSet
mermin_commuting_set(const MerminContext &ctx,
                     const std::array<HermitianOperator, kMerminCount> &obs) {
    std::vector<HermitianOperator> ops;
    for (std::size_t m : ctx.members) {
        ops.push_back(obs[m]);
    }
    const bool pair = ctx.members.size() == 2;
    Derivation d{0, [pair](std::span<const double> t) {
                     return pair ? -t[1] : t[1] * t[2];
                 }};
    Relation r{ctx.relation, [pair](std::span<const double> t) {
                   return pair ? t[0] * t[1] + 1.0 : t[0] - t[1] * t[2];
               }};
    return CommutingSet(std::move(ops), {std::move(r)}, std::move(d));
}

/// The seven commuting sets of the argument on the 4-dimensional space.
inline std::vector<CommutingSet> commuting_sets_mermin() {
    const auto obs = mermin_observables();
    std::vector<CommutingSet> out;
    for (const auto &ctx : mermin_contexts()) {
        out.push_back(mermin_commuting_set(ctx, obs));
    }
    return out;
}

struct MerminAssignment {
    std::array<int, kMerminCount> values{}; ///< ordered as MerminIndex
    int cz = 0;
};

struct MerminReport {
    std::vector<MerminAssignment> assignments; ///< all 16
    int min_cz = 0;
    int max_cz = 0;
    CMatrix operator_product; ///< s1x s2y s1y s2x s1x s2x s1y s2y
    double product_error = 0.0; ///< max |product + I|
};

/**
 * @brief Enumerates every +-1 assignment to the four spin components,
 * derives the other six values through the defining products, and forms
 * the eight-fold operator product.
 */
inline MerminReport mermin_check() {
    MerminReport rep;
    rep.min_cz = 2;
    rep.max_cz = -2;
    for (int mask = 0; mask < 16; ++mask) {
        MerminAssignment a;
        auto &v = a.values;
        v[kS1x] = (mask & 1) ? -1 : 1;
        v[kS1y] = (mask & 2) ? -1 : 1;
        v[kS2x] = (mask & 4) ? -1 : 1;
        v[kS2y] = (mask & 8) ? -1 : 1;
        v[kA] = v[kS1x] * v[kS2y];
        v[kB] = v[kS1y] * v[kS2x];
        v[kX] = v[kS1x] * v[kS2x];
        v[kY] = v[kS1y] * v[kS2y];
        v[kC] = v[kA] * v[kB];
        v[kZ] = v[kX] * v[kY];
        a.cz = v[kC] * v[kZ];
        rep.min_cz = std::min(rep.min_cz, a.cz);
        rep.max_cz = std::max(rep.max_cz, a.cz);
        rep.assignments.push_back(a);
    }
    const auto obs = mermin_observables();
    rep.operator_product = obs[kS1x].matrix() * obs[kS2y].matrix() *
                           obs[kS1y].matrix() * obs[kS2x].matrix() *
                           obs[kS1x].matrix() * obs[kS2x].matrix() *
                           obs[kS1y].matrix() * obs[kS2y].matrix();
    rep.product_error =
        max_abs_diff(rep.operator_product, -CMatrix::identity(4));
    return rep;
}

} // namespace nll
