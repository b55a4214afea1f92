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
 * Measurement simulation on maximally entangled states: Born sampling of
 * commuting sets, spin observables embedded in larger spaces, conditional
 * correlations, and the Kochen-Specker / Mermin contradictions realized
 * through perfect correlations.
 */

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contextuality.hpp"
#include "entangle.hpp"
#include "lhv.hpp"

namespace nll {

struct MeasurementOutcome {
    std::vector<double> tuple;
    StateVector post_state;
};

/**
 * @brief Projective measurement of a commuting set, with projectors
 * precomputed once and reused across trials.
 */
class JointMeasurement {
  public:
    explicit JointMeasurement(const CommutingSet &cs)
        : spaces_(joint_spectrum(cs)) {}

    [[nodiscard]] const std::vector<JointEigenspace> &spaces() const noexcept {
        return spaces_;
    }

    /// Born weights <psi|P_k|psi>, one per joint eigenspace.
    [[nodiscard]] std::vector<double> weights(const StateVector &s) const {
        std::vector<double> w;
        w.reserve(spaces_.size());
        for (const auto &sp : spaces_) {
            const double r = norm2(matvec(sp.basis.adjoint(), s.amps()));
            w.push_back(r * r);
        }
        return w;
    }

    /// Index of the sampled eigenspace.
    [[nodiscard]] std::size_t sample_index(std::span<const double> weights,
                                           Rng &rng) const {
        double total = 0.0;
        for (double w : weights) {
            total += w;
        }
        if (!(total > 0.0)) {
            fail(ErrorCode::ZeroState, "state has no weight on the spectrum");
        }
        const double u = rng.uniform() * total;
        double acc = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            acc += weights[k];
            if (u < acc) {
                return k;
            }
        }
        // Rounding can leave u == total; take the last nonzero entry.
        for (std::size_t k = weights.size(); k-- > 0;) {
            if (weights[k] > 0.0) {
                return k;
            }
        }
        return weights.size() - 1;
    }

    [[nodiscard]] MeasurementOutcome sample(const StateVector &s,
                                            Rng &rng) const {
        const auto w = weights(s);
        const std::size_t k = sample_index(w, rng);
        return {spaces_[k].values, collapse(s, k)};
    }

    /// P_k psi / ||P_k psi||
    [[nodiscard]] StateVector collapse(const StateVector &s,
                                       std::size_t k) const {
        const auto &b = spaces_[k].basis;
        return StateVector(s.dims(), matvec(b, matvec(b.adjoint(), s.amps())));
    }

  private:
    std::vector<JointEigenspace> spaces_;
};

/// One Born-rule draw of the joint values of a commuting set.
inline MeasurementOutcome sample_joint_outcome(const StateVector &s,
                                               const CommutingSet &cs,
                                               Rng &rng) {
    if (s.size() != cs.dim()) {
        fail(ErrorCode::DimMismatch, "state and commuting set dimensions");
    }
    return JointMeasurement(cs).sample(s, rng);
}

/// Operator on subsystem `which` (0 or 1) of a two-factor space.
inline CMatrix on_subsystem(const CMatrix &op, std::size_t which,
                            std::size_t other_dim) {
    const CMatrix id = CMatrix::identity(other_dim);
    return which == 0 ? tensor(op, id) : tensor(id, op);
}

inline HermitianOperator on_subsystem(const HermitianOperator &op,
                                      std::size_t which, std::size_t other_dim,
                                      const std::string &suffix) {
    return HermitianOperator(on_subsystem(op.matrix(), which, other_dim),
                             op.label() + suffix);
}

// ---------------------------------------------------------------------------
// Embedded observables
// ---------------------------------------------------------------------------

struct EmbeddedObservable {
    HermitianOperator op;
    std::vector<std::size_t> block;
    HermitianOperator templ;
};

/// Places `t` on the listed basis indices of an N-dimensional space; zero on
/// the orthogonal complement.
inline EmbeddedObservable embed(std::size_t big_n,
                                std::vector<std::size_t> block,
                                const HermitianOperator &t) {
    if (block.size() != t.dim() || big_n < block.size()) {
        fail(ErrorCode::BadIndices, "block size must match template");
    }
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (block[i] >= big_n) {
            fail(ErrorCode::BadIndices, "block index out of range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (block[i] == block[j]) {
                fail(ErrorCode::BadIndices, "repeated block index");
            }
        }
    }
    CMatrix m(big_n, big_n);
    for (std::size_t i = 0; i < block.size(); ++i) {
        for (std::size_t j = 0; j < block.size(); ++j) {
            m(block[i], block[j]) = t.matrix()(i, j);
        }
    }
    return {HermitianOperator(std::move(m), t.label()), std::move(block), t};
}

/// Projector onto the span of the block indices.
inline HermitianOperator block_projector(std::size_t big_n,
                                         std::span<const std::size_t> block) {
    CMatrix m(big_n, big_n);
    for (std::size_t i : block) {
        if (i >= big_n) {
            fail(ErrorCode::BadIndices, "block index out of range");
        }
        m(i, i) = 1.0;
    }
    return HermitianOperator(std::move(m), "P");
}

enum class EmbedMap { Plain, TildePartner };

/// sigma(d) on a 2-index block of an N-dimensional space. The tilde partner
/// uses the singlet map on the block, which gives -sigma(d).
inline EmbeddedObservable embed_spin_half(std::size_t big_n,
                                          std::array<std::size_t, 2> block,
                                          const Direction &d,
                                          EmbedMap which = EmbedMap::Plain) {
    if (big_n < 2) {
        fail(ErrorCode::BadIndices, "N must be at least 2");
    }
    HermitianOperator t = sigma(d);
    if (which == EmbedMap::TildePartner) {
        t = tilde(t, AntiUnitaryMap::singlet_map());
    }
    return embed(big_n, {block[0], block[1]}, t);
}

/**
 * @brief Singlet on the first two Schmidt terms plus sum_{k>=2} |k>|k>,
 * dims (N, N), normalized.
 */
inline StateVector bellext_state(std::size_t big_n) {
    if (big_n < 2) {
        fail(ErrorCode::BadIndices, "N must be at least 2");
    }
    CVector amps(big_n * big_n);
    amps[0 * big_n + 1] = 1.0;  // |up>|down>
    amps[1 * big_n + 0] = -1.0; // -|down>|up>
    for (std::size_t k = 2; k < big_n; ++k) {
        amps[k * big_n + k] = 1.0;
    }
    return StateVector({big_n, big_n}, std::move(amps));
}

struct ConditionalResult {
    Estimate estimate;
    double keep_fraction = 0.0;
    std::size_t attempted = 0;
    std::size_t kept = 0;
    /// <psi|xi1 xi2|psi> / <psi|P1 P2|psi>, computed without sampling.
    double analytic = 0.0;
};

/**
 * @brief Samples joint measurements of {xi1(a), P1} ⊗ {xi2(b), P2}, keeps
 * the trials with P1 = P2 = 1, and averages xi1 * xi2 over them.
 *
 * Runs until `kept_target` trials are kept or `max_attempts` are used.
 */
inline ConditionalResult conditional_correlation(const StateVector &s,
                                                 const Direction &a,
                                                 const Direction &b,
                                                 std::array<std::size_t, 2> block,
                                                 std::size_t kept_target,
                                                 Rng &rng,
                                                 std::size_t max_attempts = 0) {
    if (s.dims().size() != 2 || s.dims()[0] != s.dims()[1] || s.dims()[0] < 2) {
        fail(ErrorCode::DimMismatch, "conditional_correlation needs dims (N,N)");
    }
    const std::size_t n = s.dims()[0];
    const auto xi1 = embed_spin_half(n, block, a).op;
    const auto xi2 = embed_spin_half(n, block, b).op;
    const auto proj = block_projector(n, block);
    const CommutingSet cs({on_subsystem(xi1, 0, n, "(1)"),
                           on_subsystem(proj, 0, n, "(1)"),
                           on_subsystem(xi2, 1, n, "(2)"),
                           on_subsystem(proj, 1, n, "(2)")});
    const JointMeasurement meas(cs);
    const auto w = meas.weights(s);

    if (max_attempts == 0) {
        max_attempts = 1000 * std::max<std::size_t>(kept_target, 1);
    }
    ConditionalResult res;
    detail::Moments m;
    while (res.kept < kept_target && res.attempted < max_attempts) {
        ++res.attempted;
        const auto &t = meas.spaces()[meas.sample_index(w, rng)].values;
        if (t[1] > 0.5 && t[3] > 0.5) {
            const double x = t[0] * t[2];
            m.sum += x;
            m.sum_sq += x * x;
            ++m.n;
            ++res.kept;
        }
    }
    if (res.kept == 0) {
        fail(ErrorCode::NoKeptTrials, "every trial was discarded");
    }
    res.estimate = detail::to_estimate(m);
    res.keep_fraction =
        static_cast<double>(res.kept) / static_cast<double>(res.attempted);

    const double num =
        s.expectation(tensor(xi1.matrix(), xi2.matrix())).real();
    const double den =
        s.expectation(tensor(proj.matrix(), proj.matrix())).real();
    res.analytic = num / den;
    return res;
}

// ---------------------------------------------------------------------------
// Kochen-Specker through perfect correlations
// ---------------------------------------------------------------------------

struct KsDemoReport {
    std::size_t n = 0;
    std::size_t directions = 0;
    double residual_max = 0.0;
    TriadGraph graph;
    ColoringResult coloring;
    bool contradiction = false; ///< residuals vanish and the graph is uncolorable
    std::string narrative;
};

/**
 * @brief Squared spin-1 components (embedded in the first three basis
 * states when n > 3) on subsystem 2, partners on subsystem 1 of the
 * canonical maximally entangled state; then the coloring search on the same
 * directions.
 */
inline KsDemoReport schrodinger_ks_demo(std::size_t n,
                                        std::span<const Vec3> directions,
                                        unsigned workers = 1) {
    if (n < 3) {
        fail(ErrorCode::BadInput, "the Kochen-Specker demo needs n >= 3");
    }
    KsDemoReport rep;
    rep.n = n;
    const auto s = me_state(AntiUnitaryMap::conjugation(n));
    rep.graph = build_triad_graph(directions);
    rep.directions = rep.graph.directions.size();
    for (const auto &v : rep.graph.directions) {
        const auto a = embed(n, {0, 1, 2}, spin1_squared(Direction(v))).op;
        rep.residual_max =
            std::max(rep.residual_max, perfect_correlation_residual(s, a));
    }
    if (n > 3) {
        const std::size_t blk[] = {0, 1, 2};
        rep.residual_max = std::max(
            rep.residual_max,
            perfect_correlation_residual(s, block_projector(n, blk)));
    }
    rep.coloring = ks_color(rep.graph, workers);
    rep.contradiction = rep.residual_max < kTol && !rep.coloring.colorable();
    if (rep.contradiction) {
        rep.narrative =
            "Every s^2(d) on subsystem 2 is perfectly correlated with its "
            "partner on subsystem 1, so locality would fix a value for each "
            "one independently of context; no 0/1 assignment to these " +
            std::to_string(rep.directions) +
            " directions gives every orthogonal triad exactly one 0.";
    } else if (rep.coloring.colorable()) {
        rep.narrative = "Residuals vanish but this direction set admits a "
                        "valid coloring; no contradiction from it alone.";
    } else {
        rep.narrative = "Perfect-correlation residuals exceed tolerance.";
    }
    return rep;
}

/// {P, zeta_x^2, zeta_y^2, zeta_z^2}: spin-1 squares embedded in the first
/// three basis states of an n-dimensional space, with the block projector.
inline CommutingSet embedded_spin1_triad(std::size_t n) {
    const std::size_t blk[] = {0, 1, 2};
    return CommutingSet({block_projector(n, blk),
                         embed(n, {0, 1, 2}, spin1_squared(Direction::x())).op,
                         embed(n, {0, 1, 2}, spin1_squared(Direction::y())).op,
                         embed(n, {0, 1, 2}, spin1_squared(Direction::z())).op},
                        {{"zx + zy + zz = 2 P", [](std::span<const double> t) {
                              return t[1] + t[2] + t[3] - 2.0 * t[0];
                          }}});
}

// ---------------------------------------------------------------------------
// Product-procedure measurement
// ---------------------------------------------------------------------------

/**
 * @brief Measures every member except the derived one, then computes the
 * derived value from the results, so its relation holds on every trial.
 */
inline MeasurementOutcome product_procedure_measure(const StateVector &s,
                                                    const CommutingSet &cs,
                                                    Rng &rng) {
    if (!cs.derivation()) {
        fail(ErrorCode::BadInput, "commuting set has no derived member");
    }
    const auto &d = *cs.derivation();
    std::vector<HermitianOperator> base;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i != d.target) {
            base.push_back(cs.ops()[i]);
        }
    }
    const CommutingSet base_set(std::move(base));
    auto out = sample_joint_outcome(s, base_set, rng);
    std::vector<double> full(cs.size());
    for (std::size_t i = 0, k = 0; i < cs.size(); ++i) {
        full[i] = i == d.target ? 0.0 : out.tuple[k++];
    }
    full[d.target] = d.value(full);
    out.tuple = std::move(full);
    return out;
}

// ---------------------------------------------------------------------------
// Mermin through perfect correlations
// ---------------------------------------------------------------------------

struct MerminContextStats {
    std::string observable;
    std::string context;
    std::size_t trials = 0;
    std::size_t equal = 0;
    std::size_t partner_plus = 0; ///< trials with M~ = +1
    [[nodiscard]] double equality_rate() const {
        return trials ? static_cast<double>(equal) / static_cast<double>(trials)
                      : 0.0;
    }
    [[nodiscard]] double partner_plus_fraction() const {
        return trials ? static_cast<double>(partner_plus) /
                            static_cast<double>(trials)
                      : 0.0;
    }
};

struct MerminDemoReport {
    std::size_t n = 0;
    std::size_t trials_per_context = 0;
    double residual_max = 0.0;
    std::vector<MerminContextStats> contexts;
    double equality_rate = 0.0;
    /// Largest |difference| of the M~ = +1 frequency between the two contexts
    /// of one observable, in units of its standard error.
    double max_marginal_shift_sigma = 0.0;
    MerminReport value_map;
};

/**
 * @brief For each Mermin observable M on subsystem 2 (first four basis
 * states) and each of its two contexts, jointly measures the context
 * together with M~ on subsystem 1 and records how often M and M~ agree.
 */
inline MerminDemoReport schrodinger_mermin_demo(std::size_t n,
                                                std::size_t trials, Rng &rng) {
    if (n < 4) {
        fail(ErrorCode::BadInput, "the Mermin demo needs n >= 4");
    }
    MerminDemoReport rep;
    rep.n = n;
    rep.trials_per_context = trials;
    const auto me = me_state(AntiUnitaryMap::conjugation(n));
    const auto base = mermin_observables();
    std::array<HermitianOperator, kMerminCount> obs;
    for (std::size_t i = 0; i < kMerminCount; ++i) {
        obs[i] = embed(n, {0, 1, 2, 3}, base[i]).op;
        rep.residual_max =
            std::max(rep.residual_max, perfect_correlation_residual(me, obs[i]));
    }

    std::size_t total = 0;
    std::size_t equal = 0;
    for (std::size_t m = 0; m < kMerminCount; ++m) {
        const auto partner = on_subsystem(tilde(obs[m], me.u), 0, n, "(1)");
        std::vector<MerminContextStats> mine;
        for (const auto &ctx : mermin_contexts()) {
            const auto pos =
                std::find(ctx.members.begin(), ctx.members.end(), m);
            if (pos == ctx.members.end()) {
                continue;
            }
            std::vector<HermitianOperator> ops{partner};
            for (std::size_t k : ctx.members) {
                ops.push_back(on_subsystem(obs[k], 1, n, "(2)"));
            }
            const JointMeasurement meas{CommutingSet(std::move(ops))};
            const auto w = meas.weights(me.state);
            const std::size_t slot =
                1 + static_cast<std::size_t>(pos - ctx.members.begin());
            MerminContextStats st{kMerminLabels[m], ctx.relation, trials, 0, 0};
            for (std::size_t t = 0; t < trials; ++t) {
                const auto &tuple =
                    meas.spaces()[meas.sample_index(w, rng)].values;
                st.equal += std::abs(tuple[0] - tuple[slot]) < 1e-8;
                st.partner_plus += tuple[0] > 0.5;
            }
            total += st.trials;
            equal += st.equal;
            mine.push_back(st);
        }
        if (mine.size() == 2 && trials > 0) {
            const double p1 = mine[0].partner_plus_fraction();
            const double p2 = mine[1].partner_plus_fraction();
            const double pool = 0.5 * (p1 + p2);
            const double se =
                std::sqrt(2.0 * pool * (1.0 - pool) / static_cast<double>(trials));
            const double shift = se > 0.0 ? std::abs(p1 - p2) / se
                                          : (p1 == p2 ? 0.0 : 1e300);
            rep.max_marginal_shift_sigma =
                std::max(rep.max_marginal_shift_sigma, shift);
        }
        rep.contexts.insert(rep.contexts.end(), mine.begin(), mine.end());
    }
    rep.equality_rate =
        total ? static_cast<double>(equal) / static_cast<double>(total) : 0.0;
    rep.value_map = mermin_check();
    return rep;
}

} // namespace nll
