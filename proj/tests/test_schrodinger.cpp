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

#include <cmath>
#include <map>

#include "catch_amalgamated.hpp"
#include "nll/schrodinger.hpp"

using namespace nll;
using Catch::Approx;

namespace {

bool in_spectrum(const CommutingSet &cs, const std::vector<double> &t) {
    for (const auto &s : joint_spectrum(cs)) {
        bool same = s.values.size() == t.size();
        for (std::size_t i = 0; same && i < t.size(); ++i)
            same = std::abs(s.values[i] - t[i]) <= 1e-8;
        if (same) return true;
    }
    return false;
}

} // namespace

TEST_CASE("eigenstates measure their own tuple", "[sample]") {
    Rng rng(71);
    const CommutingSet cs({sigma(Direction::z())});
    for (int rep = 0; rep < 100; ++rep) {
        const auto out = sample_joint_outcome(spin_down(Direction::z()), cs, rng);
        CHECK(out.tuple[0] == Approx(-1.0).margin(1e-12));
    }
}

TEST_CASE("singlet spins along one axis always sum to zero", "[sample]") {
    Rng rng(72);
    const auto d = Direction::from_degrees(70, 20);
    const auto s = sigma(d);
    const CommutingSet cs({on_subsystem(s, 0, 2, "(1)"), on_subsystem(s, 1, 2, "(2)")});
    const JointMeasurement m(cs);
    const auto w = m.weights(singlet());
    std::size_t plus = 0;
    const std::size_t n = 10000;
    for (std::size_t t = 0; t < n; ++t) {
        const auto &v = m.spaces()[m.sample_index(w, rng)].values;
        REQUIRE(v[0] + v[1] == Approx(0.0).margin(1e-10));
        plus += v[0] > 0;
    }
    const double f = double(plus) / n;
    CHECK(std::abs(f - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("Born frequencies match projector weights", "[sample][property]") {
    Rng rng(73);
    for (int rep = 0; rep < 5; ++rep) {
        const auto s = random_state({2, 2}, rng);
        const auto a = Direction::random(rng);
        const auto b = Direction::random(rng);
        const CommutingSet cs({on_subsystem(sigma(a), 0, 2, "(1)"),
                               on_subsystem(sigma(b), 1, 2, "(2)")});
        const JointMeasurement m(cs);
        const auto w = m.weights(s);
        double total = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            total += w[k];
            CHECK(w[k] == Approx(s.expectation(m.spaces()[k].projector()).real()).margin(1e-12));
        }
        CHECK(total == Approx(1.0).margin(1e-12));
        std::vector<std::size_t> counts(w.size());
        const std::size_t n = 10000;
        for (std::size_t t = 0; t < n; ++t) ++counts[m.sample_index(w, rng)];
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double se = std::sqrt(w[k] * (1 - w[k]) / n);
            CHECK(std::abs(double(counts[k]) / n - w[k]) <= 4.0 * se + 1e-12);
        }
    }
}

TEST_CASE("repeated measurement returns the same tuple", "[sample][property]") {
    Rng rng(74);
    const auto sets = commuting_sets_mermin();
    for (int rep = 0; rep < 50; ++rep) {
        const auto s = random_state({2, 2}, rng);
        const auto &cs = sets[rep % sets.size()];
        const auto first = sample_joint_outcome(s, cs, rng);
        CHECK(in_spectrum(cs, first.tuple));
        for (int again = 0; again < 5; ++again) {
            const auto second = sample_joint_outcome(first.post_state, cs, rng);
            CHECK(second.tuple == first.tuple);
        }
    }
}

TEST_CASE("sampling errors", "[sample]") {
    Rng rng(75);
    const CommutingSet cs({sigma(Direction::z())});
    CHECK_THROWS_AS(sample_joint_outcome(singlet(), cs, rng), Error);
    const JointMeasurement m(cs);
    const std::vector<double> zero{0.0, 0.0};
    try {
        (void)m.sample_index(zero, rng);
        FAIL("expected ZeroState");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ZeroState);
    }
}

TEST_CASE("perfect correlations survive sampling", "[sample]") {
    Rng rng(76);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 2 + rep;
        const auto me = me_state(AntiUnitaryMap(random_unitary(n, rng)));
        const HermitianOperator a(random_hermitian(n, rng), "A");
        const CommutingSet cs({on_subsystem(tilde(a, me.u), 0, n, "(1)"),
                               on_subsystem(a, 1, n, "(2)")});
        const JointMeasurement m(cs);
        const auto w = m.weights(me.state);
        std::size_t equal = 0;
        for (int t = 0; t < 10000; ++t) {
            const auto &v = m.spaces()[m.sample_index(w, rng)].values;
            equal += std::abs(v[0] - v[1]) <= 1e-8;
        }
        CHECK(equal == 10000);
    }
    const auto me3 = me_state(AntiUnitaryMap::conjugation(3));
    const auto s2 = spin1_squared(Direction::from_degrees(35, 80));
    const CommutingSet cs({on_subsystem(tilde(s2, me3.u), 0, 3, "(1)"),
                           on_subsystem(s2, 1, 3, "(2)")});
    for (int t = 0; t < 1000; ++t) {
        const auto out = sample_joint_outcome(me3.state, cs, rng);
        CHECK(out.tuple[0] == Approx(out.tuple[1]).margin(1e-8));
    }
}

TEST_CASE("embedded spin-1/2 observables", "[embed]") {
    const auto d = Direction::from_degrees(50, 130);
    CHECK(max_abs_diff(embed_spin_half(2, {0, 1}, d).op.matrix(), sigma(d).matrix()) == 0.0);
    const std::array<double, 4> want{1, -1, 0, 0};
    CHECK(max_abs_diff(embed_spin_half(4, {0, 1}, Direction::z()).op.matrix(),
                       CMatrix::diagonal(want)) == 0.0);
    CHECK(max_abs_diff(embed_spin_half(4, {0, 1}, d, EmbedMap::TildePartner).op.matrix(),
                       embed_spin_half(4, {0, 1}, d).op.matrix() * Complex(-1.0)) <= 1e-12);
    const auto e = embed_spin_half(5, {1, 3}, d);
    const std::size_t blk[] = {1, 3};
    const auto comp = CMatrix::identity(5) - block_projector(5, blk).matrix();
    CHECK((e.op.matrix() * comp).max_abs() == 0.0);
    CHECK_THROWS_AS(embed_spin_half(4, {0, 4}, d), Error);
    CHECK_THROWS_AS(embed_spin_half(4, {2, 2}, d), Error);
}

TEST_CASE("extended singlet is annihilated by total block spin", "[embed]") {
    Rng rng(77);
    for (std::size_t n : {2u, 4u, 6u}) {
        const auto s = bellext_state(n);
        for (int rep = 0; rep < 10; ++rep) {
            const auto d = Direction::random(rng);
            const auto xi = embed_spin_half(n, {0, 1}, d).op.matrix();
            const auto id = CMatrix::identity(n);
            CHECK(norm2(matvec(tensor(xi, id) + tensor(id, xi), s.amps())) <= 1e-12);
        }
    }
}

TEST_CASE("conditional correlation", "[conditional]") {
    Rng rng(78);
    const auto a = Direction::from_degrees(20, 0);
    const auto b = Direction::from_degrees(95, 40);

    const auto r2 = conditional_correlation(bellext_state(2), a, b, {0, 1}, 10000, rng);
    CHECK(r2.keep_fraction == 1.0);
    CHECK(std::abs(r2.estimate.mean + dot(a, b)) <= 3.0 * r2.estimate.std_error);

    const auto r4 = conditional_correlation(bellext_state(4), a, b, {0, 1}, 10000, rng);
    CHECK(r4.analytic == Approx(-dot(a, b)).margin(1e-12));
    CHECK(std::abs(r4.estimate.mean - r4.analytic) <= 3.0 * r4.estimate.std_error);
    const double keep_se = std::sqrt(0.25 / double(r4.attempted));
    CHECK(std::abs(r4.keep_fraction - 0.5) <= 4.0 * keep_se);

    const auto same = conditional_correlation(bellext_state(4), a, a, {0, 1}, 2000, rng);
    CHECK(same.estimate.mean == -1.0);

    // No weight on the block: every trial is discarded.
    CVector amps(16);
    amps[2 * 4 + 2] = 1.0;
    const StateVector off({4, 4}, amps);
    try {
        conditional_correlation(off, a, b, {0, 1}, 10, rng, 200);
        FAIL("expected NoKeptTrials");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NoKeptTrials);
    }
}

TEST_CASE("Kochen-Specker demo through perfect correlations", "[demo]") {
    const auto peres = schrodinger_ks_demo(3, peres33());
    CHECK(peres.residual_max < 1e-10);
    CHECK_FALSE(peres.coloring.colorable());
    CHECK(peres.contradiction);

    const auto axes = schrodinger_ks_demo(3, coordinate_axes());
    CHECK(axes.residual_max < 1e-10);
    CHECK(axes.coloring.colorable());
    CHECK_FALSE(axes.contradiction);

    const auto big = schrodinger_ks_demo(4, peres33());
    CHECK(big.residual_max < 1e-10);
    CHECK(big.contradiction);
    CHECK_THROWS_AS(schrodinger_ks_demo(2, coordinate_axes()), Error);
}

TEST_CASE("embedded spin-1 triad restricted to P = 1", "[demo]") {
    const auto js = joint_spectrum(embedded_spin1_triad(4));
    std::vector<std::vector<double>> on_block;
    for (const auto &s : js) {
        if (s.values[0] > 0.5) on_block.push_back({s.values[1], s.values[2], s.values[3]});
    }
    REQUIRE(on_block.size() == 3);
    const std::vector<std::vector<double>> want{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(on_block[i][k] == Approx(want[i][k]).margin(1e-12));
    CHECK(check_spectrum_constraints(embedded_spin1_triad(5)));
}

TEST_CASE("product procedure enforces the relation", "[product]") {
    Rng rng(79);
    const auto obs = mermin_observables();
    const auto sets = commuting_sets_mermin();
    for (const auto &cs : sets) {
        REQUIRE(cs.derivation());
        for (int t = 0; t < 100; ++t) {
            const auto s = random_state({2, 2}, rng);
            const auto out = product_procedure_measure(s, cs, rng);
            for (const auto &rel : cs.relations()) CHECK(rel.residual(out.tuple) == 0.0);
            CHECK(in_spectrum(cs, out.tuple));
        }
    }
    const CommutingSet plain({sigma(Direction::z())});
    CHECK_THROWS_AS(product_procedure_measure(singlet(), plain, rng), Error);
}

TEST_CASE("Mermin demo through perfect correlations", "[demo]") {
    Rng rng(80);
    const auto rep = schrodinger_mermin_demo(4, 1000, rng);
    CHECK(rep.residual_max < 1e-10);
    CHECK(rep.contexts.size() == 20);
    CHECK(rep.equality_rate == 1.0);
    for (const auto &c : rep.contexts) CHECK(c.equal == c.trials);
    CHECK(rep.max_marginal_shift_sigma <= 4.0);
    CHECK(rep.value_map.min_cz == 1);
    CHECK(rep.value_map.max_cz == 1);
    CHECK(rep.value_map.product_error <= 1e-12);
    CHECK_THROWS_AS(schrodinger_mermin_demo(3, 10, rng), Error);
}
