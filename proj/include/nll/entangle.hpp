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
 * Maximally entangled states built from anti-unitary maps, the partner
 * observable A~ = U A U^-1, and perfect-correlation checks.
 *
 * An anti-unitary map is stored as U = Ubar K, where K is entrywise complex
 * conjugation in the computational basis, so U v = Ubar conj(v).
 */

#pragma once

#include <cmath>
#include <optional>

#include "linalg.hpp"
#include "spin.hpp"

namespace nll {

class AntiUnitaryMap {
  public:
    explicit AntiUnitaryMap(CMatrix ubar, double tol = kTol)
        : ubar_(std::move(ubar)) {
        if (!ubar_.square() || unitarity_error(ubar_) > tol) {
            fail(ErrorCode::NotUnitary, "anti-unitary factor must be unitary");
        }
        const CMatrix sq = ubar_ * ubar_.conj();
        const CMatrix id = CMatrix::identity(dim());
        if (max_abs_diff(sq, id) <= tol) {
            square_sign_ = 1;
        } else if (max_abs_diff(sq, -id) <= tol) {
            square_sign_ = -1;
        }
    }

    /// Plain complex conjugation K in dimension n.
    static AntiUnitaryMap conjugation(std::size_t n) {
        return AntiUnitaryMap(CMatrix::identity(n));
    }

    /// The spin-1/2 map whose maximally entangled state is the singlet.
    static AntiUnitaryMap singlet_map() {
        return AntiUnitaryMap(CMatrix{{0.0, 1.0}, {-1.0, 0.0}});
    }

    [[nodiscard]] const CMatrix &ubar() const noexcept { return ubar_; }
    [[nodiscard]] std::size_t dim() const noexcept { return ubar_.rows(); }

    /// True when U^2 = +1.
    [[nodiscard]] bool is_involution() const noexcept {
        return square_sign_ == 1;
    }
    /// +1 or -1 when U^2 = +-1, 0 otherwise.
    [[nodiscard]] int square_sign() const noexcept { return square_sign_; }

    [[nodiscard]] CVector operator()(std::span<const Complex> v) const {
        if (v.size() != dim()) {
            fail(ErrorCode::DimMismatch, "anti-unitary map of dim " +
                                             std::to_string(dim()) +
                                             " applied to length " +
                                             std::to_string(v.size()));
        }
        CVector c(v.begin(), v.end());
        for (auto &x : c) {
            x = std::conj(x);
        }
        return matvec(ubar_, c);
    }

    /// Inverse map: U^-1 = K Ubar†, i.e. Ubar' = conj(Ubar)†  = Ubar^T.
    [[nodiscard]] AntiUnitaryMap inverse() const {
        return AntiUnitaryMap(ubar_.transpose());
    }

  private:
    CMatrix ubar_;
    int square_sign_ = 0;
};

inline StateVector anti_apply(const AntiUnitaryMap &u, const StateVector &v) {
    return StateVector(v.dims(), u(v.amps()));
}

/// Orthonormal basis stored as matrix columns.
using Basis = CMatrix;

inline bool is_orthonormal(const Basis &b, double tol = kTol) {
    return b.square() && unitarity_error(b) <= tol;
}

struct MaxEntangledState {
    std::size_t n = 0;
    AntiUnitaryMap u;
    Basis basis;
    StateVector state;
};

/**
 * @brief (1/sqrt n) sum_k (U phi_k) ⊗ phi_k.
 *
 * @param basis columns phi_k; defaults to the computational basis.
 */
inline MaxEntangledState me_state(const AntiUnitaryMap &u,
                                  std::optional<Basis> basis = std::nullopt) {
    const std::size_t n = u.dim();
    Basis b = basis ? std::move(*basis) : Basis::identity(n);
    if (b.rows() != n) {
        fail(ErrorCode::DimMismatch, "basis dimension does not match map");
    }
    if (!is_orthonormal(b)) {
        fail(ErrorCode::BasisNotOrthonormal, "me_state basis");
    }
    CVector amps(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        const CVector phi = column(b, k);
        const CVector uphi = u(phi);
        const CVector term = kron(uphi, phi);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += term[i];
        }
    }
    StateVector st({n, n}, std::move(amps));
    return MaxEntangledState{n, u, std::move(b), std::move(st)};
}

/// Ubar conj(A) Ubar†. Direct conjugation; spectra need no special care.
inline HermitianOperator tilde(const HermitianOperator &a,
                               const AntiUnitaryMap &u) {
    if (a.dim() != u.dim()) {
        fail(ErrorCode::DimMismatch, "tilde: operator and map dimensions");
    }
    CMatrix t = u.ubar() * a.matrix().conj() * u.ubar().adjoint();
    t = (t + t.adjoint()) * Complex(0.5);
    return HermitianOperator(std::move(t), a.label() + "~");
}

/// ||(A~ ⊗ I - I ⊗ A) psi||, zero whenever the state is maximally entangled
/// for this map.
inline double perfect_correlation_residual(const MaxEntangledState &s,
                                           const HermitianOperator &a) {
    if (a.dim() != s.n) {
        fail(ErrorCode::DimMismatch, "operator must act on one subsystem");
    }
    const CMatrix id = CMatrix::identity(s.n);
    const CMatrix diff =
        tensor(tilde(a, s.u).matrix(), id) - tensor(id, a.matrix());
    return norm2(matvec(diff, s.state.amps()));
}

/**
 * @brief (1/sqrt n) sum_k phi_k ⊗ U phi_k, the state with the subsystem roles
 * exchanged.
 *
 * Requires U^2 = +-1; the result then equals the original state times that
 * sign.
 */
inline StateVector roles_swapped_state(const MaxEntangledState &s) {
    if (s.u.square_sign() == 0) {
        fail(ErrorCode::NotInvolution, "roles_swapped_state needs U^2 = +-1");
    }
    CVector amps(s.n * s.n);
    for (std::size_t k = 0; k < s.n; ++k) {
        const CVector phi = column(s.basis, k);
        const CVector term = kron(phi, s.u(phi));
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += term[i];
        }
    }
    return StateVector({s.n, s.n}, std::move(amps));
}

/// Schmidt coefficients of a bipartite pure state, descending.
inline std::vector<double> schmidt_coefficients(const StateVector &s) {
    if (s.dims().size() != 2) {
        fail(ErrorCode::DimMismatch, "Schmidt decomposition needs 2 factors");
    }
    const std::size_t n1 = s.dims()[0];
    const std::size_t n2 = s.dims()[1];
    CMatrix m(n1, n2);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            m(i, j) = s[i * n2 + j];
        }
    }
    const auto eig = hermitian_eig(m * m.adjoint());
    std::vector<double> out;
    for (auto it = eig.values.rbegin(); it != eig.values.rend(); ++it) {
        out.push_back(std::sqrt(std::max(0.0, *it)));
    }
    return out;
}

/// Real orthogonal symmetric matrix Q diag(+-1) Q^T; as Ubar it gives an
/// anti-unitary involution.
inline CMatrix random_involution_factor(std::size_t n, Rng &rng) {
    CMatrix g(n, n);
    for (auto &x : g.data()) {
        x = rng.normal();
    }
    const CMatrix q = gram_schmidt(std::move(g));
    std::vector<double> signs(n);
    for (auto &s : signs) {
        s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    CMatrix out = q * CMatrix::diagonal(signs) * q.transpose();
    for (auto &x : out.data()) {
        x = x.real();
    }
    return (out + out.transpose()) * Complex(0.5);
}

} // namespace nll
