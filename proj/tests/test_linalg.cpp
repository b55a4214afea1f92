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

#include <algorithm>
#include <cmath>
#include <complex>

#include "catch_amalgamated.hpp"
#include "nll/linalg.hpp"
#include "nll/spin.hpp"

using namespace nll;
using Catch::Approx;

namespace {

// Roots of lambda^2 - tr lambda + det for a 2x2 Hermitian matrix.
std::array<double, 2> quadratic_eigs(const CMatrix &m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double off = std::norm(m(0, 1));
    const double tr = a + d;
    const double det = a * d - off;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

CMatrix reconstruct(const EigenSystem &e) {
    return e.vectors * CMatrix::diagonal(e.values) * e.vectors.adjoint();
}

} // namespace

TEST_CASE("tensor of identities is identity", "[tensor]") {
    const auto id = CMatrix::identity(2);
    CHECK(max_abs_diff(tensor(id, id), CMatrix::identity(4)) == 0.0);
}

TEST_CASE("tensor maps basis vector pairs to the product index", "[tensor]") {
    const CMatrix e0{{1}, {0}};
    const CMatrix e1{{0}, {1}};
    const auto t = tensor(e0, e1);
    REQUIRE(t.rows() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(t(i, 0) == Complex(i == 1 ? 1.0 : 0.0));
    }
}

TEST_CASE("tensor entries follow the index formula", "[tensor]") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_gaussian_matrix(2, 2, rng);
        const auto b = random_gaussian_matrix(3, 3, rng);
        const auto t = tensor(a, b);
        REQUIRE(t.rows() == 6);
        REQUIRE(t.cols() == 6);
        CHECK(t(1 * 3 + 2, 0 * 3 + 1) == a(1, 0) * b(2, 1));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t k = 0; k < 3; ++k)
                    for (std::size_t l = 0; l < 3; ++l)
                        CHECK(t(i * 3 + k, j * 3 + l) == a(i, j) * b(k, l));
    }
}

TEST_CASE("tensor is associative and mixes with products", "[tensor][property]") {
    Rng rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = random_gaussian_matrix(2, 2, rng);
        const auto b = random_gaussian_matrix(3, 3, rng);
        const auto c = random_gaussian_matrix(2, 2, rng);
        const auto d = random_gaussian_matrix(3, 3, rng);
        CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) <= 1e-14);
        CHECK(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) <= 1e-12);
    }
}

TEST_CASE("diagonal input gives sorted diagonal and permutation vectors", "[eig]") {
    const std::array<double, 3> diag{3.0, 1.0, 2.0};
    const auto e = hermitian_eig(CMatrix::diagonal(diag));
    CHECK(e.values == std::vector<double>{1.0, 2.0, 3.0});
    for (std::size_t c = 0; c < 3; ++c) {
        int ones = 0;
        for (std::size_t r = 0; r < 3; ++r) {
            const double v = std::abs(e.vectors(r, c));
            CHECK((v == 0.0 || v == 1.0));
            ones += v == 1.0;
        }
        CHECK(ones == 1);
    }
}

TEST_CASE("real diagonal eigenvalues are exact", "[eig][property]") {
    Rng rng(13);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rep % 7;
        std::vector<double> d(n);
        for (auto &x : d) x = rng.uniform(-5, 5);
        const auto e = hermitian_eig(CMatrix::diagonal(d));
        std::sort(d.begin(), d.end());
        CHECK(e.values == d);
    }
}

TEST_CASE("sigma has eigenvalues -1 and +1 in every direction", "[eig]") {
    Rng rng(14);
    for (int rep = 0; rep < 50; ++rep) {
        const auto e = hermitian_eig(sigma(Direction::random(rng)).matrix());
        CHECK(e.values[0] == Approx(-1.0).margin(1e-12));
        CHECK(e.values[1] == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("2x2 eigenvalues match the quadratic formula", "[eig]") {
    Rng rng(15);
    for (int rep = 0; rep < 200; ++rep) {
        const auto m = random_hermitian(2, rng);
        const auto e = hermitian_eig(m);
        const auto q = quadratic_eigs(m);
        CHECK(e.values[0] == Approx(q[0]).margin(1e-10));
        CHECK(e.values[1] == Approx(q[1]).margin(1e-10));
    }
}

TEST_CASE("eigendecomposition round-trips for random Hermitian matrices",
          "[eig][property]") {
    Rng rng(16);
    double worst = 0.0;
    double worst_unitary = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 2 + rep % 7;
        const auto m = random_hermitian(n, rng);
        const auto e = hermitian_eig(m);
        REQUIRE(std::is_sorted(e.values.begin(), e.values.end()));
        worst = std::max(worst, max_abs_diff(reconstruct(e), m));
        worst_unitary = std::max(worst_unitary, unitarity_error(e.vectors));
    }
    CHECK(worst <= 1e-10);
    CHECK(worst_unitary <= 1e-10);
}

TEST_CASE("degenerate spectra still give an orthonormal eigenbasis", "[eig]") {
    Rng rng(17);
    const auto u = random_unitary(5, rng);
    const std::array<double, 5> d{1.0, 1.0, 1.0, -2.0, -2.0};
    const CMatrix m = u * CMatrix::diagonal(d) * u.adjoint();
    const auto e = hermitian_eig(m);
    CHECK(unitarity_error(e.vectors) <= 1e-10);
    CHECK(max_abs_diff(reconstruct(e), m) <= 1e-10);
    const auto clusters = eigen_clusters(e.values);
    REQUIRE(clusters.size() == 2);
}

TEST_CASE("non-Hermitian input is rejected", "[eig]") {
    const CMatrix m{{1, 2}, {0, 1}};
    CHECK_THROWS_AS(hermitian_eig(m), Error);
    try {
        hermitian_eig(m);
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotHermitian);
    }
    CHECK_THROWS_AS(HermitianOperator(m, "bad"), Error);
}

TEST_CASE("commutators of Pauli matrices", "[commutator]") {
    CHECK(commutator(pauli_x(), pauli_x()).max_abs() == 0.0);
    CHECK(anticommutator(pauli_x(), pauli_y()).max_abs() == 0.0);
    const auto id = CMatrix::identity(2);
    CHECK(commutator(tensor(pauli_x(), id), tensor(id, pauli_y())).max_abs() == 0.0);
    CHECK(max_abs_diff(commutator(pauli_x(), pauli_y()),
                       pauli_z() * Complex(0.0, 2.0)) == 0.0);
    CHECK_THROWS_AS(commutator(pauli_x(), CMatrix::identity(3)), Error);
}

TEST_CASE("state vectors normalize and reject zero", "[state]") {
    const StateVector s({2}, {Complex(3, 0), Complex(0, 4)});
    CHECK(norm2(s.amps()) == Approx(1.0).margin(1e-12));
    CHECK_THROWS_AS(StateVector({2}, {0.0, 0.0}), Error);
    CHECK_THROWS_AS(StateVector({2, 2}, {1.0, 0.0}), Error);
}
