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
 * Commuting sets of observables, their joint eigenvalues, and checks of
 * functional relations f(O1, O2, ...) = 0 on the joint spectrum.
 */

#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace nll {

/// A relation among the members of a commuting set, evaluated on a tuple of
/// their values; satisfied when the residual is (numerically) zero.
struct Relation {
    std::string text;
    std::function<double(std::span<const double>)> residual;
};

/// Expresses one member as a function of the others, so the set can be
/// measured by measuring the others and computing the derived value.
struct Derivation {
    std::size_t target = 0;
    std::function<double(std::span<const double>)> value;
};

inline constexpr double kCommuteTol = 1e-10;
inline constexpr double kClusterTol = 1e-8;

/**
 * @brief A list of pairwise-commuting Hermitian operators on one space.
 */
class CommutingSet {
  public:
    CommutingSet() = default;
    CommutingSet(std::vector<HermitianOperator> ops,
                 std::vector<Relation> relations = {},
                 std::optional<Derivation> derivation = std::nullopt)
        : ops_(std::move(ops)), relations_(std::move(relations)),
          derivation_(std::move(derivation)) {
        if (ops_.empty()) {
            fail(ErrorCode::BadInput, "empty commuting set");
        }
        for (const auto &op : ops_) {
            if (op.dim() != ops_.front().dim()) {
                fail(ErrorCode::DimMismatch, "commuting set member dimensions");
            }
        }
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            for (std::size_t j = i + 1; j < ops_.size(); ++j) {
                const double c =
                    commutator(ops_[i].matrix(), ops_[j].matrix()).max_abs();
                if (c > kCommuteTol) {
                    fail(ErrorCode::NotCommuting,
                         "[" + ops_[i].label() + ", " + ops_[j].label() +
                             "] has entries up to " + std::to_string(c));
                }
            }
        }
        if (derivation_ && derivation_->target >= ops_.size()) {
            fail(ErrorCode::BadIndices, "derivation target out of range");
        }
    }

    [[nodiscard]] const std::vector<HermitianOperator> &ops() const noexcept {
        return ops_;
    }
    [[nodiscard]] const std::vector<Relation> &relations() const noexcept {
        return relations_;
    }
    [[nodiscard]] const std::optional<Derivation> &derivation() const noexcept {
        return derivation_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return ops_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return ops_.front().dim(); }

    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view label) const {
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            if (ops_[i].label() == label) {
                return i;
            }
        }
        return std::nullopt;
    }

    [[nodiscard]] std::string describe() const {
        std::string s = "{";
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            s += (i ? ", " : "") + ops_[i].label();
        }
        return s + "}";
    }

  private:
    std::vector<HermitianOperator> ops_;
    std::vector<Relation> relations_;
    std::optional<Derivation> derivation_;
};

/// One joint eigenspace: a value per operator and an orthonormal basis.
struct JointEigenspace {
    std::vector<double> values;
    CMatrix basis; ///< dim x multiplicity, orthonormal columns

    [[nodiscard]] std::size_t multiplicity() const noexcept {
        return basis.cols();
    }
    [[nodiscard]] CMatrix projector() const { return basis * basis.adjoint(); }
};

namespace detail {

inline CMatrix select_columns(const CMatrix &m, std::size_t begin,
                              std::size_t end) {
    CMatrix out(m.rows(), end - begin);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = begin; j < end; ++j) {
            out(i, j - begin) = m(i, j);
        }
    }
    return out;
}

inline CMatrix hcat(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(i, j) = a(i, j);
        }
        for (std::size_t j = 0; j < b.cols(); ++j) {
            out(i, a.cols() + j) = b(i, j);
        }
    }
    return out;
}

// Splits span(basis) into eigenspaces of the compression of `op`.
inline std::vector<CMatrix> split_subspace(const CMatrix &basis,
                                           const CMatrix &op) {
    CMatrix compressed = basis.adjoint() * op * basis;
    compressed = (compressed + compressed.adjoint()) * Complex(0.5);
    const auto eig = hermitian_eig(compressed, 1e-8);
    std::vector<CMatrix> out;
    for (const auto &[b, e] : eigen_clusters(eig.values, kClusterTol)) {
        out.push_back(basis * select_columns(eig.vectors, b, e));
    }
    return out;
}

inline bool tuple_less(const std::vector<double> &a,
                       const std::vector<double> &b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > kClusterTol) {
            return a[i] < b[i];
        }
    }
    return false;
}

inline bool tuple_equal(const std::vector<double> &a,
                        const std::vector<double> &b, double tol = kClusterTol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/**
 * @brief Simultaneous diagonalization of a commuting set.
 *
 * Diagonalizes a fixed random combination sum r_i O_i, then re-splits each
 * eigenvalue cluster by every individual operator, so accidental
 * degeneracies of the combination cannot merge distinct joint eigenvalues.
 * Tuples are returned in lexicographic order; multiplicities sum to dim.
 */
inline std::vector<JointEigenspace> joint_spectrum(const CommutingSet &cs) {
    Rng rng(0x5eedULL, cs.size());
    CMatrix combo(cs.dim(), cs.dim());
    for (const auto &op : cs.ops()) {
        combo += op.matrix() * Complex(rng.uniform(0.5, 1.5));
    }
    std::vector<CMatrix> spaces =
        detail::split_subspace(CMatrix::identity(cs.dim()), combo);
    for (const auto &op : cs.ops()) {
        std::vector<CMatrix> next;
        for (const auto &sp : spaces) {
            auto parts = detail::split_subspace(sp, op.matrix());
            next.insert(next.end(), parts.begin(), parts.end());
        }
        spaces = std::move(next);
    }

    std::vector<JointEigenspace> out;
    for (auto &sp : spaces) {
        std::vector<double> values;
        for (const auto &op : cs.ops()) {
            const Complex tr = (sp.adjoint() * op.matrix() * sp).trace();
            values.push_back(tr.real() / static_cast<double>(sp.cols()));
        }
        auto same = std::find_if(out.begin(), out.end(), [&](const auto &js) {
            return detail::tuple_equal(js.values, values);
        });
        if (same != out.end()) {
            same->basis = detail::hcat(same->basis, sp);
        } else {
            out.push_back({std::move(values), std::move(sp)});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
        return detail::tuple_less(a.values, b.values);
    });
    return out;
}

/// True iff every joint-eigenvalue tuple satisfies every relation within tol.
inline bool check_spectrum_constraints(const CommutingSet &cs,
                                       double tol = kClusterTol) {
    for (const auto &js : joint_spectrum(cs)) {
        for (const auto &rel : cs.relations()) {
            if (std::abs(rel.residual(js.values)) > tol) {
                return false;
            }
        }
    }
    return true;
}

/// Distinct eigenvalues of one operator (clustered at 1e-8).
inline std::vector<double> distinct_eigenvalues(const HermitianOperator &op) {
    const auto eig = hermitian_eig(op);
    std::vector<double> out;
    for (const auto &[b, e] : eigen_clusters(eig.values, kClusterTol)) {
        double s = 0.0;
        for (std::size_t k = b; k < e; ++k) {
            s += eig.values[k];
        }
        out.push_back(s / static_cast<double>(e - b));
    }
    return out;
}

} // namespace nll
