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
#include <set>

#include "catch_amalgamated.hpp"
#include "nll/contextuality.hpp"

using namespace nll;
using Catch::Approx;

namespace {

std::vector<std::vector<double>> tuples(const std::vector<JointEigenspace> &js) {
    std::vector<std::vector<double>> out;
    for (const auto &s : js) out.push_back(s.values);
    return out;
}

bool close(const std::vector<double> &a, const std::vector<double> &b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

// Brute-force colorability: tries all 2^n assignments.
bool colorable_by_enumeration(const TriadGraph &g) {
    const std::size_t n = g.directions.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Coloring c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1;
        if (verify_coloring(g, c).empty() && verify_pair_rule(g, c).empty()) return true;
    }
    return false;
}

} // namespace

TEST_CASE("spin-1 squares have three joint values summing to 2", "[spectrum]") {
    const CommutingSet cs({spin1_squared(Direction::x()), spin1_squared(Direction::y()),
                           spin1_squared(Direction::z())},
                          {{"sum = 2", [](std::span<const double> t) {
                                return t[0] + t[1] + t[2] - 2.0;
                            }}});
    const auto js = joint_spectrum(cs);
    REQUIRE(js.size() == 3);
    const std::vector<std::vector<double>> want{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(close(js[i].values, want[i], 1e-12));
        CHECK(js[i].multiplicity() == 1);
        CHECK(js[i].values[0] + js[i].values[1] + js[i].values[2] ==
              Approx(2.0).margin(1e-12));
    }
    CHECK(check_spectrum_constraints(cs));

    const CommutingSet wrong(cs.ops(), {{"sum = 3", [](std::span<const double> t) {
                                             return t[0] + t[1] + t[2] - 3.0;
                                         }}});
    CHECK_FALSE(check_spectrum_constraints(wrong));
}

TEST_CASE("diagonal operators give pairs of diagonal entries", "[spectrum]") {
    const std::array<double, 4> a{2, 1, 2, 1};
    const std::array<double, 4> b{5, 5, 7, 5};
    const CommutingSet cs({HermitianOperator(CMatrix::diagonal(a), "a"),
                           HermitianOperator(CMatrix::diagonal(b), "b")});
    const auto js = joint_spectrum(cs);
    REQUIRE(js.size() == 3);
    CHECK(close(js[0].values, {1, 5}, 1e-14));
    CHECK(js[0].multiplicity() == 2);
    CHECK(close(js[1].values, {2, 5}, 1e-14));
    CHECK(close(js[2].values, {2, 7}, 1e-14));
    std::size_t total = 0;
    for (const auto &s : js) total += s.multiplicity();
    CHECK(total == 4);
}

TEST_CASE("joint eigenspaces are eigenspaces of every member", "[spectrum][property]") {
    Rng rng(61);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 3 + rep % 4;
        const auto u = random_unitary(n, rng);
        std::vector<HermitianOperator> ops;
        for (int k = 0; k < 3; ++k) {
            std::vector<double> d(n);
            for (auto &x : d) x = std::floor(rng.uniform(0, 3));
            ops.emplace_back(u * CMatrix::diagonal(d) * u.adjoint(), "o");
        }
        const CommutingSet cs(ops);
        std::size_t total = 0;
        for (const auto &s : joint_spectrum(cs)) {
            total += s.multiplicity();
            for (std::size_t k = 0; k < ops.size(); ++k) {
                const auto lhs = ops[k].matrix() * s.basis;
                const auto rhs = s.basis * Complex(s.values[k]);
                CHECK(max_abs_diff(lhs, rhs) <= 1e-9);
            }
        }
        CHECK(total == n);
    }
}

TEST_CASE("non-commuting sets are rejected", "[spectrum]") {
    try {
        CommutingSet({sigma(Direction::x()), sigma(Direction::y())});
        FAIL("expected NotCommuting");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NotCommuting);
    }
}

TEST_CASE("projector sums satisfy additivity", "[spectrum]") {
    Rng rng(62);
    const auto u = random_unitary(5, rng);
    const std::array<double, 5> d1{1, 1, 0, 0, 0};
    const std::array<double, 5> d2{0, 0, 1, 0, 0};
    const CMatrix p1 = u * CMatrix::diagonal(d1) * u.adjoint();
    const CMatrix p2 = u * CMatrix::diagonal(d2) * u.adjoint();
    const CommutingSet cs({HermitianOperator(p1 + p2, "P"), HermitianOperator(p1, "P1"),
                           HermitianOperator(p2, "P2")},
                          {{"P = P1 + P2", [](std::span<const double> t) {
                                return t[0] - t[1] - t[2];
                            }}});
    CHECK(check_spectrum_constraints(cs));
    // Any density matrix gives additive probabilities on these projectors.
    const auto rho = outer(random_state({5}, rng).amps(), random_state({5}, rng).amps());
    const CMatrix sym = (rho + rho.adjoint()) * Complex(0.5);
    CHECK(std::abs((sym * (p1 + p2)).trace() - (sym * p1).trace() - (sym * p2).trace()) <=
          1e-12);
}

TEST_CASE("triad graphs", "[graph]") {
    const auto axes = build_triad_graph(coordinate_axes());
    CHECK(axes.triads.size() == 1);

    const auto triple = octant_counterexample_triple();
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(norm(triple[i]) == Approx(1.0).margin(1e-15));
        for (std::size_t j = i + 1; j < 3; ++j) {
            CHECK(std::abs(dot(triple[i], triple[j])) <= 1e-15);
        }
    }
    CHECK(build_triad_graph(triple).triads.size() == 1);
}

TEST_CASE("Peres set: 33 rays and 16 triads", "[graph]") {
    const auto dirs = peres33();
    const auto g = build_triad_graph(dirs);
    REQUIRE(g.directions.size() == 33);
    // Enumeration oracle on the raw vectors.
    std::size_t pairs = 0;
    std::size_t triads = 0;
    for (std::size_t i = 0; i < 33; ++i)
        for (std::size_t j = i + 1; j < 33; ++j) {
            if (std::abs(dot(dirs[i], dirs[j])) > 1e-9) continue;
            ++pairs;
            for (std::size_t k = j + 1; k < 33; ++k)
                triads += std::abs(dot(dirs[i], dirs[k])) <= 1e-9 &&
                          std::abs(dot(dirs[j], dirs[k])) <= 1e-9;
        }
    CHECK(triads == 16);
    CHECK(g.triads.size() == triads);
    CHECK(g.orthogonal_pairs.size() == pairs);
    for (const auto &t : g.triads) {
        CHECK(std::abs(dot(g.directions[t[0]], g.directions[t[1]])) <= 1e-6);
        CHECK(std::abs(dot(g.directions[t[0]], g.directions[t[2]])) <= 1e-6);
        CHECK(std::abs(dot(g.directions[t[1]], g.directions[t[2]])) <= 1e-6);
    }
}

TEST_CASE("antipodes are identified", "[graph][property]") {
    auto dirs = peres33();
    const auto base = build_triad_graph(dirs);
    for (const auto &v : peres33()) dirs.push_back({-v[0], -v[1], -v[2]});
    const auto both = build_triad_graph(dirs);
    CHECK(both.directions.size() == base.directions.size());
    CHECK(both.triads == base.triads);
}

TEST_CASE("coloring search", "[ks]") {
    const auto axes = build_triad_graph(coordinate_axes());
    const auto ra = ks_color(axes);
    REQUIRE(ra.colorable());
    CHECK(verify_coloring(axes, *ra.coloring).empty());

    const auto peres = build_triad_graph(peres33());
    const auto rp = ks_color(peres);
    CHECK_FALSE(rp.colorable());
    CHECK(rp.nodes > 0);
    const auto rp4 = ks_color(peres, 4);
    CHECK_FALSE(rp4.colorable());

    auto mixed = coordinate_axes();
    const auto t = octant_counterexample_triple();
    mixed.insert(mixed.end(), t.begin(), t.end());
    const auto gm = build_triad_graph(mixed);
    CHECK(gm.triads.size() == 2);
    const auto rm = ks_color(gm);
    REQUIRE(rm.colorable());
    CHECK(verify_coloring(gm, *rm.coloring).empty());
    CHECK(verify_pair_rule(gm, *rm.coloring).empty());
}

TEST_CASE("search agrees with exhaustive enumeration", "[ks][property]") {
    Rng rng(63);
    const auto all = peres33();
    int colorable = 0;
    int uncolorable = 0;
    for (int rep = 0; rep < 150; ++rep) {
        std::vector<Vec3> subset;
        std::vector<std::size_t> idx(all.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = idx.size(); i-- > 1;) {
            std::swap(idx[i], idx[static_cast<std::size_t>(rng.uniform() * double(i + 1))]);
        }
        const std::size_t n = 8 + rep % 9;
        for (std::size_t i = 0; i < n; ++i) subset.push_back(all[idx[i]]);
        const auto g = build_triad_graph(subset);
        const auto r = ks_color(g);
        const auto rpar = ks_color(g, 3);
        CHECK(r.colorable() == colorable_by_enumeration(g));
        CHECK(rpar.colorable() == r.colorable());
        if (r.colorable()) {
            ++colorable;
            CHECK(verify_coloring(g, *r.coloring).empty());
            CHECK(verify_pair_rule(g, *r.coloring).empty());
            CHECK(*rpar.coloring == *ks_color(g, 3).coloring);
        } else {
            ++uncolorable;
        }
    }
    CHECK(colorable > 0);
}

TEST_CASE("octant coloring fails on the orthogonal triple", "[ks]") {
    auto dirs = coordinate_axes();
    const auto t = octant_counterexample_triple();
    dirs.insert(dirs.end(), t.begin(), t.end());
    const auto g = build_triad_graph(dirs);
    const auto c = octant_coloring(g);
    const auto bad = verify_coloring(g, c);
    REQUIRE(bad.size() == 1);
    for (std::size_t k : bad[0]) CHECK(c[k] == 1);
    // Axes triad is fine under the same scheme: z is red, x and y blue.
    CHECK(c[0] == 1);
    CHECK(c[1] == 1);
    CHECK(c[2] == 0);

    const auto peres = build_triad_graph(peres33());
    CHECK(verify_coloring(peres, Coloring(peres.directions.size(), 1)).size() ==
          peres.triads.size());
}

TEST_CASE("Mermin value maps versus operators", "[mermin]") {
    const auto rep = mermin_check();
    REQUIRE(rep.assignments.size() == 16);
    for (const auto &a : rep.assignments) CHECK(a.cz == 1);
    CHECK(rep.min_cz == 1);
    CHECK(rep.max_cz == 1);
    CHECK(rep.product_error <= 1e-12);
    CHECK(max_abs_diff(rep.operator_product, -CMatrix::identity(4)) <= 1e-12);
}

TEST_CASE("Mermin observables", "[mermin]") {
    const auto obs = mermin_observables();
    const auto id = CMatrix::identity(2);
    CHECK(max_abs_diff(obs[kS1x].matrix(), tensor(pauli_x(), id)) == 0.0);
    CHECK(max_abs_diff(obs[kS2y].matrix(), tensor(id, pauli_y())) == 0.0);
    CHECK(anticommutator(obs[kS1x].matrix(), obs[kS1y].matrix()).max_abs() == 0.0);
    CHECK(max_abs_diff(obs[kC].matrix() * obs[kZ].matrix(), -CMatrix::identity(4)) <= 1e-12);
}

TEST_CASE("the seven Mermin contexts", "[mermin]") {
    const auto sets = commuting_sets_mermin();
    REQUIRE(sets.size() == 7);
    for (const auto &cs : sets) {
        CHECK(check_spectrum_constraints(cs));
        // Candidate tuples over each member's eigenvalues: exactly those
        // satisfying the relations occur in the joint spectrum.
        std::vector<std::vector<double>> grids;
        for (const auto &op : cs.ops()) grids.push_back(distinct_eigenvalues(op));
        const auto joint = tuples(joint_spectrum(cs));
        std::size_t total = 1;
        for (const auto &gr : grids) total *= gr.size();
        std::size_t satisfying = 0;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<double> t;
            std::size_t c = code;
            for (const auto &gr : grids) {
                t.push_back(gr[c % gr.size()]);
                c /= gr.size();
            }
            bool ok = true;
            for (const auto &rel : cs.relations()) ok = ok && std::abs(rel.residual(t)) <= 1e-8;
            const bool in_joint = std::any_of(joint.begin(), joint.end(),
                                             [&](const auto &s) { return close(s, t, 1e-8); });
            CHECK(ok == in_joint);
            satisfying += ok;
        }
        CHECK(satisfying == joint.size());
    }
    const auto cz = sets.back();
    REQUIRE(cz.size() == 2);
    for (const auto &s : joint_spectrum(cz)) {
        CHECK(s.values[0] * s.values[1] == Approx(-1.0).margin(1e-12));
    }
}

TEST_CASE("von Neumann reconstruction", "[vn]") {
    Rng rng(64);
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto psi = random_state({n}, rng);
        const auto rep = vn_reconstruct(n, pure_state_functional(psi), rng);
        CHECK(max_abs_diff(rep.density, outer(psi.amps(), psi.amps())) <= 1e-10);
        CHECK(rep.roundtrip_error <= 1e-10);
        CHECK(rep.trace_is_one);
        CHECK(rep.positive);
        CHECK(rep.hermitian);

        const auto mixed = vn_reconstruct(n, maximally_mixed_functional(n), rng);
        CHECK(max_abs_diff(mixed.density, CMatrix::identity(n) * Complex(1.0 / double(n))) <=
              1e-10);
        CHECK(std::abs(mixed.trace - 1.0) <= 1e-12);
        CHECK(mixed.min_expectation == Approx(1.0 / double(n)).margin(1e-12));
    }
    const LinearFunctional scaled = [](const CMatrix &o) { return 2.0 * o.trace(); };
    CHECK_FALSE(vn_reconstruct(3, scaled, rng).trace_is_one);
    const LinearFunctional squared = [](const CMatrix &o) { return o(0, 0) * o(0, 0); };
    try {
        vn_reconstruct(3, squared, rng);
        FAIL("expected NonlinearFunctional");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::NonlinearFunctional);
    }
}

TEST_CASE("linearity counterexamples", "[vn]") {
    Rng rng(65);
    const auto rep = linearity_counterexamples(rng);
    REQUIRE(rep.spin_rows.size() == 4);
    CHECK(rep.spin_satisfying == 0);
    CHECK(rep.spin_rows[0].required == Approx(std::numbers::sqrt2).margin(1e-15));
    CHECK(rep.sigma_prime_eigenvalues[0] == Approx(-1.0).margin(1e-12));
    CHECK(rep.sigma_prime_eigenvalues[1] == Approx(1.0).margin(1e-12));
    CHECK(rep.oscillator_odd_hits == 0);
    CHECK(oscillator_ratio(1.0, 0.0, 0.0, 1.0) == 0.0);
    CHECK_FALSE(is_odd_integer(0.0));
    CHECK(is_odd_integer(3.0));
    for (std::size_t k = 0; k < rep.oscillator_levels.size(); ++k) {
        CHECK(rep.oscillator_levels[k] == double(2 * k + 1));
    }
    CHECK(rep.oscillator_level_error <= 1e-8);
}
