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
 * Spin-1/2 and spin-1 operators along arbitrary directions.
 *
 * Spin-1/2 components use the Pauli normalization (eigenvalues +1 and -1).
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "linalg.hpp"

namespace nll {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3 &a, const Vec3 &b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }

/// Rodrigues rotation of v about a unit axis.
inline Vec3 rotate(const Vec3 &v, const Vec3 &axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Vec3 kxv = cross(axis, v);
    const double kv = dot(axis, v);
    Vec3 out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = v[i] * c + kxv[i] * s + axis[i] * kv * (1.0 - c);
    }
    return out;
}

/**
 * @brief A unit vector on the sphere, addressable by polar angles.
 *
 * The Cartesian vector is the primary representation; (theta, phi) are
 * derived from it unless the direction was constructed from angles.
 */
class Direction {
  public:
    Direction() : Direction(Vec3{0.0, 0.0, 1.0}) {}

    explicit Direction(const Vec3 &v) {
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) {
            fail(ErrorCode::BadInput, "direction must be a nonzero vector");
        }
        v_ = {v[0] / n, v[1] / n, v[2] / n};
        theta_ = std::acos(std::clamp(v_[2], -1.0, 1.0));
        phi_ = std::atan2(v_[1], v_[0]);
        if (phi_ < 0.0) {
            phi_ += 2.0 * std::numbers::pi;
        }
    }

    static Direction from_angles(double theta, double phi) {
        Direction d;
        d.theta_ = theta;
        d.phi_ = phi;
        d.v_ = {std::sin(theta) * std::cos(phi),
                std::sin(theta) * std::sin(phi), std::cos(theta)};
        return d;
    }

    /// Direction in the x-y plane at azimuth phi (radians).
    static Direction in_plane(double phi) {
        return from_angles(std::numbers::pi / 2.0, phi);
    }

    static Direction from_degrees(double theta_deg, double phi_deg) {
        constexpr double k = std::numbers::pi / 180.0;
        return from_angles(theta_deg * k, phi_deg * k);
    }

    static Direction x() { return Direction(Vec3{1.0, 0.0, 0.0}); }
    static Direction y() { return Direction(Vec3{0.0, 1.0, 0.0}); }
    static Direction z() { return Direction(Vec3{0.0, 0.0, 1.0}); }

    static Direction random(Rng &rng) {
        const double cz = rng.uniform(-1.0, 1.0);
        const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - cz * cz));
        return from_angles(std::acos(cz), ph).with_vector(
            {r * std::cos(ph), r * std::sin(ph), cz});
    }

    [[nodiscard]] const Vec3 &vec() const noexcept { return v_; }
    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] double phi() const noexcept { return phi_; }

    [[nodiscard]] Direction antipode() const {
        return Direction(Vec3{-v_[0], -v_[1], -v_[2]});
    }

  private:
    Direction with_vector(const Vec3 &v) const {
        Direction d = *this;
        d.v_ = v;
        return d;
    }

    Vec3 v_{};
    double theta_ = 0.0;
    double phi_ = 0.0;
};

inline double dot(const Direction &a, const Direction &b) {
    return dot(a.vec(), b.vec());
}

inline const CMatrix &pauli_x() {
    static const CMatrix m{{0.0, 1.0}, {1.0, 0.0}};
    return m;
}
inline const CMatrix &pauli_y() {
    static const CMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
    return m;
}
inline const CMatrix &pauli_z() {
    static const CMatrix m{{1.0, 0.0}, {0.0, -1.0}};
    return m;
}

/// n.sigma = [[cos t, e^{-i p} sin t], [e^{i p} sin t, -cos t]]
inline HermitianOperator sigma(const Direction &d) {
    const auto &v = d.vec();
    CMatrix m{{v[2], Complex(v[0], -v[1])}, {Complex(v[0], v[1]), -v[2]}};
    return HermitianOperator(std::move(m), "sigma");
}

/// Eigenvector of sigma(d) with eigenvalue +1:
/// cos(t/2)|up> + sin(t/2) e^{i p}|down>.
inline StateVector spin_up(const Direction &d) {
    const double t = d.theta();
    const double p = d.phi();
    return StateVector(CVector{std::cos(t / 2.0),
                               std::sin(t / 2.0) * std::polar(1.0, p)});
}

/// Eigenvector of sigma(d) with eigenvalue -1:
/// sin(t/2) e^{-i p}|up> - cos(t/2)|down>.
inline StateVector spin_down(const Direction &d) {
    const double t = d.theta();
    const double p = d.phi();
    return StateVector(CVector{std::sin(t / 2.0) * std::polar(1.0, -p),
                               Complex(-std::cos(t / 2.0))});
}

/// (|up,down> - |down,up>)/sqrt 2 in the z basis.
inline StateVector singlet() {
    const double r = 1.0 / std::numbers::sqrt2;
    return StateVector({2, 2}, CVector{0.0, r, -r, 0.0});
}

namespace detail {

// Spin-1 generators in the m = +1, 0, -1 basis, with the 1/sqrt2 factor
// pulled out of Sx and Sy so that products stay exact.
inline const std::array<CMatrix, 3> &spin1_scaled_generators() {
    static const std::array<CMatrix, 3> g{
        CMatrix{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}},
        CMatrix{{0, Complex(0, -1), 0},
                {Complex(0, 1), 0, Complex(0, -1)},
                {0, Complex(0, 1), 0}},
        CMatrix{{1, 0, 0}, {0, 0, 0}, {0, 0, -1}},
    };
    return g;
}

// S_i S_j with the scale factors applied; entries are multiples of 1/2.
inline const std::array<std::array<CMatrix, 3>, 3> &spin1_products() {
    static const auto table = [] {
        const auto &g = spin1_scaled_generators();
        std::array<std::array<CMatrix, 3>, 3> t;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                // (1/sqrt2)^2 = 1/2 exactly when both factors are scaled.
                const int scaled = (i < 2) + (j < 2);
                const double f = scaled == 2   ? 0.5
                                 : scaled == 1 ? 0.5 * std::numbers::sqrt2
                                               : 1.0;
                t[i][j] = g[i] * g[j] * Complex(f);
            }
        }
        return t;
    }();
    return table;
}

} // namespace detail

/// Spin-1 component d.S (eigenvalues -1, 0, 1).
inline HermitianOperator spin1(const Direction &d) {
    const auto &g = detail::spin1_scaled_generators();
    const auto &v = d.vec();
    const double r = 1.0 / std::numbers::sqrt2;
    CMatrix m = g[0] * Complex(v[0] * r) + g[1] * Complex(v[1] * r) +
                g[2] * Complex(v[2]);
    return HermitianOperator(std::move(m), "s");
}

/// (d.S)^2, eigenvalues {0, 1, 1}. Built from exact generator products so
/// that the three coordinate axes sum to exactly 2 I.
inline HermitianOperator spin1_squared(const Direction &d) {
    const auto &p = detail::spin1_products();
    const auto &v = d.vec();
    CMatrix m(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double w = v[i] * v[j];
            if (w != 0.0) {
                m += p[i][j] * Complex(w);
            }
        }
    }
    // Clean rounding-level anti-Hermitian residue.
    m = (m + m.adjoint()) * Complex(0.5);
    return HermitianOperator(std::move(m), "s2");
}

} // namespace nll
