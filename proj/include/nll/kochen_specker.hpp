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
 * Kochen-Specker colorings of finite direction sets.
 *
 * A coloring assigns 0 or 1 to each direction (the value of the squared
 * spin-1 component along it). It is valid when every orthogonal triad holds
 * exactly one 0; the search additionally forbids two orthogonal directions
 * from both being 0.
 */

#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "spin.hpp"

namespace nll {

using Triad = std::array<std::size_t, 3>;
using DirectionPair = std::pair<std::size_t, std::size_t>;

/// Unit vector with its first non-negligible coordinate made positive, so a
/// direction and its antipode map to the same representative.
inline Vec3 canonicalize(const Vec3 &v) {
    const double n = norm(v);
    if (!(n > 0.0)) {
        fail(ErrorCode::BadInput, "zero direction");
    }
    Vec3 u{v[0] / n, v[1] / n, v[2] / n};
    for (double c : u) {
        if (std::abs(c) > 1e-12) {
            if (c < 0.0) {
                u = {-u[0], -u[1], -u[2]};
            }
            break;
        }
    }
    return u;
}

struct TriadGraph {
    std::vector<Vec3> directions;
    std::vector<DirectionPair> orthogonal_pairs; ///< i < j
    std::vector<Triad> triads;                   ///< i < j < k
};

/**
 * @brief Canonicalizes and deduplicates the directions, then enumerates all
 * orthogonal pairs and mutually orthogonal triples.
 */
inline TriadGraph build_triad_graph(std::span<const Vec3> input,
                                    double tol = 1e-9) {
    if (input.empty()) {
        fail(ErrorCode::BadInput, "empty direction list");
    }
    TriadGraph g;
    for (const auto &v : input) {
        const Vec3 c = canonicalize(v);
        const bool dup = std::any_of(
            g.directions.begin(), g.directions.end(), [&](const Vec3 &w) {
                return std::abs(dot(c, w)) >= 1.0 - 1e-9;
            });
        if (!dup) {
            g.directions.push_back(c);
        }
    }
    const std::size_t n = g.directions.size();
    std::vector<std::vector<char>> orth(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(dot(g.directions[i], g.directions[j])) <= tol) {
                orth[i][j] = orth[j][i] = 1;
                g.orthogonal_pairs.emplace_back(i, j);
            }
        }
    }
    for (const auto &[i, j] : g.orthogonal_pairs) {
        for (std::size_t k = j + 1; k < n; ++k) {
            if (orth[i][k] && orth[j][k]) {
                g.triads.push_back({i, j, k});
            }
        }
    }
    return g;
}

using Coloring = std::vector<int>;

/// Triads that do not carry exactly one 0.
inline std::vector<Triad> verify_coloring(const TriadGraph &g,
                                          const Coloring &c) {
    if (c.size() != g.directions.size()) {
        fail(ErrorCode::DimMismatch, "coloring must cover every direction");
    }
    std::vector<Triad> bad;
    for (const auto &t : g.triads) {
        const int zeros = (c[t[0]] == 0) + (c[t[1]] == 0) + (c[t[2]] == 0);
        if (zeros != 1) {
            bad.push_back(t);
        }
    }
    return bad;
}

/// Orthogonal pairs colored 0 and 0.
inline std::vector<DirectionPair> verify_pair_rule(const TriadGraph &g,
                                                   const Coloring &c) {
    std::vector<DirectionPair> bad;
    for (const auto &p : g.orthogonal_pairs) {
        if (c[p.first] == 0 && c[p.second] == 0) {
            bad.push_back(p);
        }
    }
    return bad;
}

struct ColoringResult {
    std::optional<Coloring> coloring; ///< empty means UNCOLORABLE
    std::size_t nodes = 0;            ///< search nodes explored
    [[nodiscard]] bool colorable() const noexcept {
        return coloring.has_value();
    }
};

namespace detail {

class KsSearch {
  public:
    explicit KsSearch(const TriadGraph &g)
        : g_(g), n_(g.directions.size()), value_(n_, -1), pairs_of_(n_),
          triads_of_(n_) {
        for (const auto &[i, j] : g.orthogonal_pairs) {
            pairs_of_[i].push_back(j);
            pairs_of_[j].push_back(i);
        }
        for (std::size_t t = 0; t < g.triads.size(); ++t) {
            for (std::size_t v : g.triads[t]) {
                triads_of_[v].push_back(t);
            }
        }
    }

    /// Assigns and propagates; on conflict the trail is rolled back to the
    /// mark taken before the call.
    bool decide(std::size_t var, int val) {
        const std::size_t mark = trail_.size();
        if (assign_and_propagate(var, val)) {
            return true;
        }
        undo(mark);
        return false;
    }

    std::size_t mark() const { return trail_.size(); }
    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            value_[trail_.back()] = -1;
            trail_.pop_back();
        }
    }

    /// Most constrained unassigned direction, or n if none is left.
    std::size_t pick() const {
        std::size_t best = n_;
        std::pair<int, std::size_t> best_key{-1, 0};
        for (std::size_t v = 0; v < n_; ++v) {
            if (value_[v] != -1) {
                continue;
            }
            int touched = 0;
            for (std::size_t t : triads_of_[v]) {
                for (std::size_t w : g_.triads[t]) {
                    touched += (w != v && value_[w] != -1);
                }
            }
            for (std::size_t w : pairs_of_[v]) {
                touched += value_[w] != -1;
            }
            const std::pair<int, std::size_t> key{
                touched, triads_of_[v].size() + pairs_of_[v].size()};
            if (key > best_key) {
                best_key = key;
                best = v;
            }
        }
        return best;
    }

    /// Depth-first search, 0 before 1. Returns true with a total assignment.
    bool search(std::size_t &nodes, const std::atomic<bool> *abort = nullptr) {
        const std::size_t v = pick();
        if (v == n_) {
            return true;
        }
        if (abort != nullptr && abort->load(std::memory_order_relaxed)) {
            return false;
        }
        for (int val : {0, 1}) {
            ++nodes;
            const std::size_t m = mark();
            if (decide(v, val)) {
                if (search(nodes, abort)) {
                    return true;
                }
                undo(m);
            }
        }
        return false;
    }

    const std::vector<int> &values() const { return value_; }
    std::size_t size() const { return n_; }

  private:
    bool set(std::size_t v, int val) {
        if (value_[v] == val) {
            return true;
        }
        if (value_[v] != -1) {
            return false;
        }
        value_[v] = val;
        trail_.push_back(v);
        queue_.push_back(v);
        return true;
    }

    bool assign_and_propagate(std::size_t var, int val) {
        queue_.clear();
        if (!set(var, val)) {
            return false;
        }
        for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
            const std::size_t v = queue_[qi];
            if (value_[v] == 0) {
                for (std::size_t w : pairs_of_[v]) {
                    if (!set(w, 1)) {
                        return false;
                    }
                }
            }
            for (std::size_t t : triads_of_[v]) {
                int zeros = 0;
                int ones = 0;
                std::size_t open = n_;
                for (std::size_t w : g_.triads[t]) {
                    if (value_[w] == 0) {
                        ++zeros;
                    } else if (value_[w] == 1) {
                        ++ones;
                    } else {
                        open = w;
                    }
                }
                if (zeros > 1 || ones == 3) {
                    return false;
                }
                if (ones == 2 && open != n_ && !set(open, 0)) {
                    return false;
                }
            }
        }
        return true;
    }

    const TriadGraph &g_;
    std::size_t n_;
    std::vector<int> value_;
    std::vector<std::vector<std::size_t>> pairs_of_;
    std::vector<std::vector<std::size_t>> triads_of_;
    std::vector<std::size_t> trail_;
    std::vector<std::size_t> queue_;
};

using DecisionPath = std::vector<std::pair<std::size_t, int>>;

// Enumerates consistent decision prefixes in DFS order until there are at
// least `target` of them (or the tree is exhausted).
inline std::vector<DecisionPath> split_frontier(const TriadGraph &g,
                                                std::size_t target,
                                                std::size_t &nodes) {
    std::vector<DecisionPath> frontier{DecisionPath{}};
    for (int depth = 0; depth < 24 && frontier.size() < target; ++depth) {
        std::vector<DecisionPath> next;
        bool expanded = false;
        for (const auto &path : frontier) {
            KsSearch s(g);
            for (const auto &[v, val] : path) {
                s.decide(v, val);
            }
            const std::size_t v = s.pick();
            if (v == s.size()) {
                next.push_back(path); // complete leaf, keep as is
                continue;
            }
            expanded = true;
            for (int val : {0, 1}) {
                ++nodes;
                const std::size_t m = s.mark();
                if (s.decide(v, val)) {
                    DecisionPath p = path;
                    p.emplace_back(v, val);
                    next.push_back(std::move(p));
                    s.undo(m);
                }
            }
        }
        frontier = std::move(next);
        if (!expanded) {
            break;
        }
    }
    return frontier;
}

} // namespace detail

/**
 * @brief Exhaustive backtracking search for a valid coloring.
 *
 * Deterministic: most-constrained direction first, 0 tried before 1. An
 * empty result is returned only after the whole tree is exhausted.
 *
 * With workers > 1 the tree is cut into prefixes that are solved
 * concurrently; the coloring from the earliest prefix (in serial DFS order)
 * wins, which is the same coloring the serial search finds.
 */
inline ColoringResult ks_color(const TriadGraph &g, unsigned workers = 1) {
    ColoringResult res;
    if (workers <= 1) {
        detail::KsSearch s(g);
        if (s.search(res.nodes)) {
            res.coloring = s.values();
        }
        return res;
    }

    std::size_t frontier_nodes = 0;
    const auto frontier =
        detail::split_frontier(g, 4 * static_cast<std::size_t>(workers),
                               frontier_nodes);
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::optional<Coloring>> found(frontier.size());
    std::vector<std::size_t> nodes(frontier.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> winner{none};
    std::vector<std::atomic<bool>> aborts(frontier.size());
    for (auto &a : aborts) {
        a = false;
    }

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= frontier.size()) {
                return;
            }
            if (i > winner.load()) {
                continue;
            }
            detail::KsSearch s(g);
            for (const auto &[v, val] : frontier[i]) {
                s.decide(v, val);
            }
            if (s.search(nodes[i], &aborts[i])) {
                found[i] = s.values();
                std::size_t cur = winner.load();
                while (i < cur && !winner.compare_exchange_weak(cur, i)) {
                }
                for (std::size_t j = i + 1; j < frontier.size(); ++j) {
                    aborts[j] = true;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }

    const std::size_t win = winner.load();
    res.nodes = frontier_nodes;
    for (std::size_t i = 0; i < frontier.size() && i <= win; ++i) {
        res.nodes += nodes[i];
    }
    if (win != none) {
        res.coloring = found[win];
    }
    return res;
}

// ---------------------------------------------------------------------------
// Direction sets
// ---------------------------------------------------------------------------

inline std::vector<Vec3> coordinate_axes() {
    return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
}

/// Mutually orthogonal triple (0.5, 0.5, -0.7071), (-0.1464, 0.8535, 0.5),
/// (0.8535, -0.1464, 0.5), in exact radical form.
inline std::vector<Vec3> octant_counterexample_triple() {
    const double r2 = std::numbers::sqrt2;
    const double lo = (2.0 - r2) / 4.0;
    const double hi = (2.0 + r2) / 4.0;
    return {{0.5, 0.5, -r2 / 2.0}, {-lo, hi, 0.5}, {hi, -lo, 0.5}};
}

/**
 * @brief Peres' 33 rays: all directions whose squared components are a
 * permutation of (0,0,1), (0,1,1), (0,1,2) or (1,1,2), up to sign.
 */
inline std::vector<Vec3> peres33() {
    const double s = std::numbers::sqrt2;
    std::vector<Vec3> out;
    auto add = [&](double a, double b, double c) {
        out.push_back(canonicalize({a, b, c}));
    };
    // (0,0,1)
    add(1, 0, 0);
    add(0, 1, 0);
    add(0, 0, 1);
    // (0,1,1)
    for (double sg : {1.0, -1.0}) {
        add(0, 1, sg);
        add(1, 0, sg);
        add(1, sg, 0);
    }
    // (0,1,2): one zero, one unit, one sqrt2
    for (double sg : {1.0, -1.0}) {
        add(0, 1, sg * s);
        add(0, s, sg * 1);
        add(1, 0, sg * s);
        add(s, 0, sg * 1);
        add(1, sg * s, 0);
        add(s, sg * 1, 0);
    }
    // (1,1,2): sqrt2 in each position, signs of the two unit entries
    for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
            add(s, s1, s2);
            add(s1, s, s2);
            add(s1, s2, s);
        }
    }
    return out;
}

/// Red (0) on the closed first octant minus its equator (x >= 0, y >= 0,
/// z > 0) and on the antipodal octant; blue (1) everywhere else.
inline int octant_color(const Vec3 &v, double eps = 1e-12) {
    const bool first = v[0] >= -eps && v[1] >= -eps && v[2] > eps;
    const bool antipodal = v[0] <= eps && v[1] <= eps && v[2] < -eps;
    return (first || antipodal) ? 0 : 1;
}

inline Coloring octant_coloring(const TriadGraph &g) {
    Coloring c;
    c.reserve(g.directions.size());
    for (const auto &v : g.directions) {
        c.push_back(octant_color(v));
    }
    return c;
}

} // namespace nll
