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
 * Expectation functionals on operators: reconstruction of the density
 * matrix U with E(O) = Tr(U O), and the two standard counterexamples to
 * demanding linearity of individual values.
 */

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "spectrum.hpp"
#include "spin.hpp"

namespace nll {

using LinearFunctional = std::function<Complex(const CMatrix &)>;

struct VonNeumannReport {
    CMatrix density;
    double roundtrip_error = 0.0; ///< max |E(O) - Tr(U O)| over random O
    Complex trace;
    bool unit_normalized = false;  ///< E(I) = 1
    bool trace_is_one = false;     ///< |Tr U - 1| <= 1e-10
    bool hermitian = false;
    bool nonnegative_on_projections = false; ///< sampled rank-1 projectors
    double min_expectation = 0.0;  ///< min <chi|U|chi> (smallest eigenvalue)
    bool positive = false;         ///< min_expectation >= -1e-10
};

/**
 * @brief Rebuilds U from E's values on the matrix units: U[n,m] = E(|m><n|).
 *
 * @throws Error(NonlinearFunctional) when E(O) and Tr(U O) disagree by more
 * than 1e-10 on any of the random test operators.
 */
inline VonNeumannReport vn_reconstruct(std::size_t n, const LinearFunctional &e,
                                       Rng &rng, int checks = 20) {
    VonNeumannReport rep;
    rep.density = CMatrix(n, n);
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t col = 0; col < n; ++col) {
            CMatrix unit(n, n);
            unit(col, row) = 1.0;
            rep.density(row, col) = e(unit);
        }
    }
    for (int k = 0; k < checks; ++k) {
        const CMatrix o = random_gaussian_matrix(n, n, rng);
        const double err = std::abs(e(o) - (rep.density * o).trace());
        rep.roundtrip_error = std::max(rep.roundtrip_error, err);
    }
    if (rep.roundtrip_error > kTol) {
        fail(ErrorCode::NonlinearFunctional,
             "E(O) != Tr(U O), error " + std::to_string(rep.roundtrip_error));
    }
    rep.trace = rep.density.trace();
    rep.unit_normalized = std::abs(e(CMatrix::identity(n)) - 1.0) <= kTol;
    rep.trace_is_one = std::abs(rep.trace - 1.0) <= kTol;
    rep.hermitian = rep.density.is_hermitian(kTol);

    rep.nonnegative_on_projections = true;
    for (int k = 0; k < checks; ++k) {
        const StateVector chi = random_state({n}, rng);
        const Complex val = e(outer(chi.amps(), chi.amps()));
        if (val.real() < -kTol || std::abs(val.imag()) > kTol) {
            rep.nonnegative_on_projections = false;
        }
    }
    if (rep.hermitian) {
        CMatrix h = (rep.density + rep.density.adjoint()) * Complex(0.5);
        rep.min_expectation = hermitian_eig(h).values.front();
        rep.positive = rep.min_expectation >= -kTol;
    }
    return rep;
}

/// E(O) = <psi|O|psi>
inline LinearFunctional pure_state_functional(const StateVector &psi) {
    return [psi](const CMatrix &o) { return psi.expectation(o); };
}

/// E(O) = Tr(O)/n
inline LinearFunctional maximally_mixed_functional(std::size_t n) {
    return [n](const CMatrix &o) {
        return o.trace() / static_cast<double>(n);
    };
}

// ---------------------------------------------------------------------------
// Linearity counterexamples
// ---------------------------------------------------------------------------

struct SpinLinearityRow {
    int v_sx = 0;
    int v_sy = 0;
    double required = 0.0; ///< (v_sx + v_sy)/sqrt 2
    bool satisfiable = false;
};

struct OscillatorCheck {
    double a = 0.0;
    double v_p2 = 0.0;
    double v_q2 = 0.0;
    double ratio = 0.0; ///< (v_p2 + a^2 v_q2)/(a hbar)
    bool odd_integer = false;
};

struct LinearityReport {
    std::vector<double> sigma_prime_eigenvalues; ///< of (sx + sy)/sqrt 2
    std::vector<SpinLinearityRow> spin_rows;
    int spin_satisfying = 0;
    std::vector<OscillatorCheck> oscillator_samples;
    int oscillator_odd_hits = 0;
    double oscillator_a = 1.0;
    double hbar = 1.0;
    std::vector<double> oscillator_levels;  ///< (2k+1) a hbar
    std::vector<double> oscillator_numeric; ///< truncated-matrix eigenvalues
    double oscillator_level_error = 0.0;
};

inline double oscillator_ratio(double a, double v_p2, double v_q2,
                               double hbar = 1.0) {
    return (v_p2 + a * a * v_q2) / (a * hbar);
}

inline bool is_odd_integer(double x, double tol = 1e-9) {
    const double r = std::round(x);
    return std::abs(x - r) <= tol && std::fmod(std::abs(r), 2.0) == 1.0;
}

/**
 * @brief H = p^2 + a^2 q^2 in a truncated number basis; the lowest levels
 * equal (2k+1) a hbar exactly because truncation only touches the top row.
 */
inline CMatrix truncated_oscillator(std::size_t dim, double a,
                                    double hbar = 1.0) {
    CMatrix lower(dim, dim);
    for (std::size_t k = 1; k < dim; ++k) {
        lower(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    const CMatrix raise = lower.adjoint();
    const CMatrix q = (lower + raise) * Complex(std::sqrt(hbar / (2.0 * a)));
    const CMatrix p =
        (raise - lower) * Complex(0.0, std::sqrt(hbar * a / 2.0));
    return p * p + q * q * Complex(a * a);
}

inline LinearityReport linearity_counterexamples(Rng &rng, int samples = 1000,
                                                 double a = 1.0,
                                                 double hbar = 1.0) {
    LinearityReport rep;
    const double r = 1.0 / std::numbers::sqrt2;
    const HermitianOperator sp((pauli_x() + pauli_y()) * Complex(r), "sigma'");
    rep.sigma_prime_eigenvalues = hermitian_eig(sp).values;
    for (int vx : {1, -1}) {
        for (int vy : {1, -1}) {
            SpinLinearityRow row{vx, vy, (vx + vy) * r, false};
            for (double cand : rep.sigma_prime_eigenvalues) {
                if (std::abs(cand - row.required) <= 1e-12) {
                    row.satisfiable = true;
                }
            }
            rep.spin_satisfying += row.satisfiable;
            rep.spin_rows.push_back(row);
        }
    }

    for (int k = 0; k < samples; ++k) {
        OscillatorCheck c;
        c.a = rng.uniform(0.1, 5.0);
        c.v_p2 = -std::log1p(-rng.uniform()) * 5.0;
        c.v_q2 = -std::log1p(-rng.uniform()) * 5.0;
        c.ratio = oscillator_ratio(c.a, c.v_p2, c.v_q2, hbar);
        c.odd_integer = is_odd_integer(c.ratio);
        rep.oscillator_odd_hits += c.odd_integer;
        rep.oscillator_samples.push_back(c);
    }

    rep.oscillator_a = a;
    rep.hbar = hbar;
    constexpr std::size_t kLevels = 6;
    const auto eig = hermitian_eig(truncated_oscillator(40, a, hbar));
    for (std::size_t k = 0; k < kLevels; ++k) {
        rep.oscillator_levels.push_back(static_cast<double>(2 * k + 1) * a * hbar);
        rep.oscillator_numeric.push_back(eig.values[k]);
        rep.oscillator_level_error =
            std::max(rep.oscillator_level_error,
                     std::abs(eig.values[k] - rep.oscillator_levels.back()));
    }
    return rep;
}

} // namespace nll
