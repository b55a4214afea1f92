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
 * Quantum and local-hidden-variable correlation functions, Bell's
 * inequality |P(a,b) - P(a,c)| <= 1 + P(b,c), and a violation search over
 * coplanar direction triples.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "linalg.hpp"
#include "spin.hpp"

namespace nll {

/// <psi| a1 ⊗ a2 |psi> for a two-factor state.
inline double quantum_correlation(const StateVector &s,
                                  const HermitianOperator &a1,
                                  const HermitianOperator &a2) {
    if (s.dims().size() != 2 || s.dims()[0] != a1.dim() ||
        s.dims()[1] != a2.dim()) {
        fail(ErrorCode::DimMismatch, "quantum_correlation operator dims");
    }
    const Complex e = s.expectation(tensor(a1.matrix(), a2.matrix()));
    if (std::abs(e.imag()) > kTol) {
        fail(ErrorCode::NonrealExpectation,
             "imaginary part " + std::to_string(e.imag()));
    }
    return e.real();
}

/// Correlation of spin components along a and b on the singlet.
inline double singlet_correlation(const Direction &a, const Direction &b) {
    static const StateVector psi = singlet();
    return quantum_correlation(psi, sigma(a), sigma(b));
}

// ---------------------------------------------------------------------------
// Local hidden variables
// ---------------------------------------------------------------------------

/**
 * @brief Deterministic local response A(lambda, d) in {-1, +1} for particle 1.
 *
 * Particle 2 always answers -A(lambda, d), which is what perfect
 * anti-correlation at equal settings forces.
 */
class LHVStrategy {
  public:
    using Response = std::function<int(const Vec3 &lambda, const Direction &d)>;

    LHVStrategy(std::string name, Response respond)
        : name_(std::move(name)), respond_(std::move(respond)) {}

    /// A(lambda, d) = sgn(lambda . d), with sgn(0) = +1.
    static LHVStrategy sign_model() {
        return {"sign", [](const Vec3 &l, const Direction &d) {
                    return dot(l, d.vec()) >= 0.0 ? 1 : -1;
                }};
    }

    static LHVStrategy constant() {
        return {"const", [](const Vec3 &, const Direction &) { return 1; }};
    }

    [[nodiscard]] int a(const Vec3 &lambda, const Direction &d) const {
        const int r = respond_(lambda, d);
        if (r != 1 && r != -1) {
            fail(ErrorCode::BadInput,
                 "strategy '" + name_ + "' returned a value other than +-1");
        }
        return r;
    }
    [[nodiscard]] int b(const Vec3 &lambda, const Direction &d) const {
        return -a(lambda, d);
    }
    [[nodiscard]] const std::string &name() const noexcept { return name_; }

  private:
    std::string name_;
    Response respond_;
};

/// Distribution of the hidden variable; uniform on the unit sphere unless a
/// different sampler is supplied.
struct LambdaDistribution {
    std::function<Vec3(Rng &)> sample = [](Rng &rng) {
        return Direction::random(rng).vec();
    };
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

struct LHVOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    /// Worker threads; results do not depend on this.
    unsigned threads = 1;
};

namespace detail {

inline constexpr std::size_t kChunk = 8192;

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
};

// Runs body(chunk_rng, count, moments_out) for every fixed-size chunk.
// Chunk c always draws from stream c, so the merged result is independent of
// the thread count.
template <std::size_t K, class Body>
std::array<Moments, K> chunked_moments(const LHVOptions &opt, Body &&body) {
    const std::size_t chunks = (opt.samples + kChunk - 1) / kChunk;
    std::vector<std::array<Moments, K>> partial(chunks);
    const Rng root(opt.seed);
    auto run = [&](std::size_t first, std::size_t stride) {
        for (std::size_t c = first; c < chunks; c += stride) {
            Rng rng = root.split(c);
            const std::size_t count =
                std::min(kChunk, opt.samples - c * kChunk);
            body(rng, count, partial[c]);
        }
    };
    const unsigned workers =
        std::max(1U, std::min<unsigned>(opt.threads, chunks));
    if (workers == 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run, w, workers);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    std::array<Moments, K> total{};
    for (const auto &p : partial) {
        for (std::size_t k = 0; k < K; ++k) {
            total[k].sum += p[k].sum;
            total[k].sum_sq += p[k].sum_sq;
            total[k].n += p[k].n;
        }
    }
    return total;
}

inline Estimate to_estimate(const Moments &m) {
    Estimate e;
    e.samples = m.n;
    if (m.n == 0) {
        return e;
    }
    const double n = static_cast<double>(m.n);
    e.mean = m.sum / n;
    const double var = std::max(0.0, m.sum_sq / n - e.mean * e.mean);
    e.std_error = m.n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return e;
}

} // namespace detail

/// Monte Carlo estimate of P(a,b) = E[A(l,a) B(l,b)].
inline Estimate lhv_correlation(const LHVStrategy &strat,
                                const LambdaDistribution &dist,
                                const Direction &a, const Direction &b,
                                const LHVOptions &opt = {}) {
    if (opt.samples == 0) {
        fail(ErrorCode::BadInput, "lhv_correlation needs at least one sample");
    }
    const auto m = detail::chunked_moments<1>(
        opt, [&](Rng &rng, std::size_t count, std::array<detail::Moments, 1> &out) {
            for (std::size_t i = 0; i < count; ++i) {
                const Vec3 l = dist.sample(rng);
                const double x = strat.a(l, a) * strat.b(l, b);
                out[0].sum += x;
                out[0].sum_sq += x * x;
                ++out[0].n;
            }
        });
    return detail::to_estimate(m[0]);
}

/// Closed form for the sign model under a uniform lambda: 2 theta/pi - 1.
inline double sign_model_correlation(const Direction &a, const Direction &b) {
    const double c = std::clamp(dot(a, b), -1.0, 1.0);
    return 2.0 * std::acos(c) / std::numbers::pi - 1.0;
}

// ---------------------------------------------------------------------------
// Bell's inequality
// ---------------------------------------------------------------------------

using CorrelationFn =
    std::function<double(const Direction &, const Direction &)>;

struct BellResult {
    double lhs = 0.0; ///< |P(a,b) - P(a,c)|
    double rhs = 0.0; ///< 1 + P(b,c)
    bool violated = false;
    [[nodiscard]] double margin() const { return lhs - rhs; }
};

inline constexpr double kBellTol = 1e-12;

inline BellResult bell_inequality(const CorrelationFn &p, const Direction &a,
                                  const Direction &b, const Direction &c) {
    BellResult r;
    r.lhs = std::abs(p(a, b) - p(a, c));
    r.rhs = 1.0 + p(b, c);
    r.violated = r.lhs > r.rhs + kBellTol;
    return r;
}

struct SampledBellResult {
    Estimate ab, ac, bc;
    double lhs = 0.0;
    double rhs = 0.0;
    double sigma = 0.0; ///< combined standard error of lhs - rhs
    /// The derivation's intermediate bound E[1 - A(l,b)A(l,c)] on the same
    /// samples; lhs <= bound <= rhs holds sample by sample.
    double intermediate_bound = 0.0;
    bool violated = false; ///< lhs > rhs + 4 sigma
    [[nodiscard]] double margin() const { return lhs - rhs; }
};

/**
 * @brief Bell check for an LHV strategy, with all three correlations
 * estimated on the same lambda samples.
 */
inline SampledBellResult lhv_bell_check(const LHVStrategy &strat,
                                        const LambdaDistribution &dist,
                                        const Direction &a, const Direction &b,
                                        const Direction &c,
                                        const LHVOptions &opt = {}) {
    const auto m = detail::chunked_moments<4>(
        opt, [&](Rng &rng, std::size_t count, std::array<detail::Moments, 4> &out) {
            for (std::size_t i = 0; i < count; ++i) {
                const Vec3 l = dist.sample(rng);
                const int aa = strat.a(l, a);
                const int ab = strat.a(l, b);
                const int ac = strat.a(l, c);
                const double xs[4] = {
                    static_cast<double>(aa * -ab),
                    static_cast<double>(aa * -ac),
                    static_cast<double>(ab * strat.b(l, c)),
                    1.0 - static_cast<double>(ab * ac),
                };
                for (int k = 0; k < 4; ++k) {
                    out[k].sum += xs[k];
                    out[k].sum_sq += xs[k] * xs[k];
                    ++out[k].n;
                }
            }
        });
    SampledBellResult r;
    r.ab = detail::to_estimate(m[0]);
    r.ac = detail::to_estimate(m[1]);
    r.bc = detail::to_estimate(m[2]);
    r.intermediate_bound = detail::to_estimate(m[3]).mean;
    r.lhs = std::abs(r.ab.mean - r.ac.mean);
    r.rhs = 1.0 + r.bc.mean;
    r.sigma = std::sqrt(r.ab.std_error * r.ab.std_error +
                        r.ac.std_error * r.ac.std_error +
                        r.bc.std_error * r.bc.std_error);
    r.violated = r.lhs > r.rhs + 4.0 * r.sigma;
    return r;
}

// ---------------------------------------------------------------------------
// Violation search
// ---------------------------------------------------------------------------

struct CoplanarTriple {
    double phi_a = 0.0; ///< degrees, x-y plane
    double phi_b = 0.0;
    double phi_c = 0.0;
    BellResult result;
};

struct ScanOptions {
    double grid_deg = 1.0;
    bool refine = true;
    /// Called for every grid point, in (a, b, c) lexicographic order.
    std::function<void(const CoplanarTriple &)> on_point;
};

namespace detail {

inline Direction plane_deg(double deg) {
    return Direction::in_plane(deg * std::numbers::pi / 180.0);
}

} // namespace detail

/**
 * @brief Coarse grid over coplanar triples, then pattern-search refinement
 * from the best grid point.
 *
 * The grid evaluates p once per ordered pair of grid angles and reuses the
 * table for every triple. Deterministic for a given grid resolution.
 */
inline CoplanarTriple maximize_violation(const CorrelationFn &p,
                                         const ScanOptions &opt = {}) {
    if (!(opt.grid_deg > 0.0) || opt.grid_deg > 360.0) {
        fail(ErrorCode::BadInput, "grid_deg must be in (0, 360]");
    }
    const auto steps = static_cast<std::size_t>(std::llround(360.0 / opt.grid_deg));
    std::vector<double> angle(steps);
    std::vector<Direction> dirs;
    dirs.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        angle[i] = static_cast<double>(i) * opt.grid_deg;
        dirs.push_back(detail::plane_deg(angle[i]));
    }
    std::vector<double> table(steps * steps);
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t j = 0; j < steps; ++j) {
            table[i * steps + j] = p(dirs[i], dirs[j]);
        }
    }

    CoplanarTriple best;
    double best_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t j = 0; j < steps; ++j) {
            const double pab = table[i * steps + j];
            for (std::size_t k = 0; k < steps; ++k) {
                BellResult r;
                r.lhs = std::abs(pab - table[i * steps + k]);
                r.rhs = 1.0 + table[j * steps + k];
                r.violated = r.lhs > r.rhs + kBellTol;
                if (opt.on_point) {
                    opt.on_point({angle[i], angle[j], angle[k], r});
                }
                if (r.margin() > best_margin) {
                    best_margin = r.margin();
                    best = {angle[i], angle[j], angle[k], r};
                }
            }
        }
    }

    if (opt.refine) {
        auto eval = [&](double a, double b, double c) {
            return bell_inequality(p, detail::plane_deg(a), detail::plane_deg(b),
                                   detail::plane_deg(c));
        };
        double step = opt.grid_deg / 2.0;
        while (step > 1e-7) {
            bool improved = false;
            for (int axis = 0; axis < 3; ++axis) {
                for (double sgn : {1.0, -1.0}) {
                    double cand[3] = {best.phi_a, best.phi_b, best.phi_c};
                    cand[axis] += sgn * step;
                    const BellResult r = eval(cand[0], cand[1], cand[2]);
                    if (r.margin() > best.result.margin() + 1e-15) {
                        best = {cand[0], cand[1], cand[2], r};
                        improved = true;
                    }
                }
            }
            if (!improved) {
                step /= 2.0;
            }
        }
    }
    return best;
}

} // namespace nll
