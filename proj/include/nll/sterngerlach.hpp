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
 * One-dimensional Bohmian model of a spin-1/2 particle crossing a
 * Stern-Gerlach magnet. Each spin component is a Gaussian evolved in closed
 * form under its linear potential; trajectories follow the guidance flow of
 * the two-component spinor.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "random.hpp"

namespace nll {

/**
 * @brief Magnet and particle parameters.
 *
 * Inside the magnet (0 <= t < t_exit) the spin-s component (s = +1 up,
 * s = -1 down) feels V = s * (bias + gradient * z); afterwards it is free.
 */
struct FieldConfig {
    double gradient = -5.0;
    double bias = 0.0;
    double mass = 1.0;
    double hbar = 1.0;
    double t_exit = 1.0;
    double width = 1.0; ///< initial position standard deviation

    void validate() const {
        if (!(mass > 0.0) || !(hbar > 0.0) || !(width > 0.0) ||
            !(t_exit >= 0.0) || !std::isfinite(gradient) ||
            !std::isfinite(bias)) {
            fail(ErrorCode::BadInput, "invalid field configuration");
        }
    }

    /// Force on component s while inside the magnet.
    [[nodiscard]] double force(int spin) const { return -spin * gradient; }
};

/**
 * @brief w * exp(i/hbar [alpha (z-q)^2 + p (z-q) + gamma]).
 */
struct GaussianComponent {
    int spin = 1;
    Complex weight{1.0, 0.0};
    double q = 0.0;
    double p = 0.0;
    Complex alpha{};
    Complex gamma{};

    [[nodiscard]] double log_density(double z, double hbar) const {
        const double dz = z - q;
        return std::log(std::norm(weight)) -
               2.0 * (alpha.imag() * dz * dz + gamma.imag()) / hbar;
    }
    [[nodiscard]] Complex amplitude(double z, double hbar) const {
        const double dz = z - q;
        return weight * std::exp(Complex(0.0, 1.0) *
                                 (alpha * dz * dz + p * dz + gamma) / hbar);
    }
    /// Standard deviation of |amplitude|^2.
    [[nodiscard]] double sigma(double hbar) const {
        return std::sqrt(hbar / (4.0 * alpha.imag()));
    }
    /// Local velocity of this component alone.
    [[nodiscard]] double velocity(double z, double mass) const {
        return (2.0 * alpha.real() * (z - q) + p) / mass;
    }
};

struct SpinorPacket {
    double t = 0.0;
    std::array<GaussianComponent, 2> c; ///< [0] up, [1] down

    [[nodiscard]] const GaussianComponent &up() const { return c[0]; }
    [[nodiscard]] const GaussianComponent &down() const { return c[1]; }
};

/// Equal-weight spinor with a real, centered Gaussian profile.
inline SpinorPacket initial_packet(const FieldConfig &f) {
    f.validate();
    SpinorPacket s;
    const Complex alpha0(0.0, f.hbar / (4.0 * f.width * f.width));
    const Complex gamma0(
        0.0, f.hbar / 4.0 *
                 std::log(2.0 * std::numbers::pi * f.width * f.width));
    for (int k = 0; k < 2; ++k) {
        s.c[k] = {k == 0 ? 1 : -1, Complex(std::numbers::sqrt2 / 2.0, 0.0),
                  0.0, 0.0, alpha0, gamma0};
    }
    return s;
}

namespace detail {

// Exact evolution over tau under the constant force `force` and
// V(z) = v0 - force * z.
inline void heller_step(GaussianComponent &g, double tau, double force,
                        double v0, double mass, double hbar) {
    if (tau <= 0.0) {
        return;
    }
    const Complex den = 1.0 + 2.0 * g.alpha * tau / mass;
    const double p = g.p;
    const double q = g.q;
    const double kinetic =
        (p * p * tau + p * force * tau * tau +
         force * force * tau * tau * tau / 3.0) /
        (2.0 * mass);
    const double q_integral = q * tau + p * tau * tau / (2.0 * mass) +
                              force * tau * tau * tau / (6.0 * mass);
    const double potential = v0 * tau - force * q_integral;
    g.gamma += Complex(0.0, hbar / 2.0) * std::log(den) + kinetic - potential;
    g.alpha /= den;
    g.q = q + p * tau / mass + force * tau * tau / (2.0 * mass);
    g.p = p + force * tau;
}

} // namespace detail

/// Advances the packet by `dt`, switching off the field at t_exit.
inline SpinorPacket evolve_packet(SpinorPacket s, const FieldConfig &f,
                                  double dt) {
    if (dt < 0.0 || !std::isfinite(dt)) {
        fail(ErrorCode::NegativeTime, "evolution time must be non-negative");
    }
    f.validate();
    const double t_end = s.t + dt;
    const double in_field = std::max(0.0, std::min(t_end, f.t_exit) - s.t);
    const double free = dt - in_field;
    for (auto &g : s.c) {
        detail::heller_step(g, in_field, f.force(g.spin), g.spin * f.bias,
                            f.mass, f.hbar);
        detail::heller_step(g, free, 0.0, 0.0, f.mass, f.hbar);
    }
    s.t = t_end;
    return s;
}

/// Packet at absolute time t, evolved from the initial packet.
inline SpinorPacket packet_at(const FieldConfig &f, double t) {
    return evolve_packet(initial_packet(f), f, t);
}

inline constexpr double kDensityFloor = 1e-300;

inline double packet_density(const SpinorPacket &s, double z, double hbar) {
    double d = 0.0;
    for (const auto &g : s.c) {
        d += std::exp(g.log_density(z, hbar));
    }
    return d;
}

/**
 * @brief (hbar/m) Im[(chi_up* chi_up' + chi_dn* chi_dn') / |chi|^2].
 *
 * Component weights are combined in log space, so the ratio stays finite
 * far out in either tail.
 */
inline double guidance_velocity(const SpinorPacket &s, double z,
                                const FieldConfig &f) {
    const double l0 = s.c[0].log_density(z, f.hbar);
    const double l1 = s.c[1].log_density(z, f.hbar);
    const double lmax = std::max(l0, l1);
    if (!(lmax + std::log1p(std::exp(std::min(l0, l1) - lmax)) >=
          std::log(kDensityFloor))) {
        fail(ErrorCode::NodeRegion, "density below floor at z");
    }
    const double r0 = std::exp(l0 - lmax);
    const double r1 = std::exp(l1 - lmax);
    return (r0 * s.c[0].velocity(z, f.mass) + r1 * s.c[1].velocity(z, f.mass)) /
           (r0 + r1);
}

enum class Branch { Lower, Upper };

inline const char *to_string(Branch b) {
    return b == Branch::Upper ? "upper" : "lower";
}

/// Reported spin value for a branch: upper means +1 when the gradient is
/// negative and -1 when it is positive. Zero gradient gives 0.
inline int branch_outcome(Branch b, double gradient) {
    if (gradient == 0.0) {
        return 0;
    }
    const int upper = gradient < 0.0 ? 1 : -1;
    return b == Branch::Upper ? upper : -upper;
}

/// Packets at every half step 0, h/2, h, ..., T, shared by all trajectories.
class PacketTimeline {
  public:
    PacketTimeline(const FieldConfig &f, double dt, double total)
        : f_(f) {
        f.validate();
        if (total < 0.0 || !std::isfinite(total)) {
            fail(ErrorCode::NegativeTime, "total time must be non-negative");
        }
        if (!(dt > 0.0)) {
            fail(ErrorCode::BadInput, "dt must be positive");
        }
        steps_ = static_cast<std::size_t>(std::ceil(total / dt - 1e-9));
        h_ = steps_ ? total / static_cast<double>(steps_) : 0.0;
        packets_.reserve(2 * steps_ + 1);
        const SpinorPacket p0 = initial_packet(f);
        for (std::size_t k = 0; k <= 2 * steps_; ++k) {
            packets_.push_back(
                evolve_packet(p0, f, 0.5 * h_ * static_cast<double>(k)));
        }
    }

    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] const FieldConfig &field() const noexcept { return f_; }
    /// Packet at time k * h / 2.
    [[nodiscard]] const SpinorPacket &half(std::size_t k) const {
        return packets_[k];
    }
    [[nodiscard]] const SpinorPacket &final() const { return packets_.back(); }

  private:
    FieldConfig f_;
    std::size_t steps_ = 0;
    double h_ = 0.0;
    std::vector<SpinorPacket> packets_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> z;
    std::vector<double> v;
    std::vector<double> density;
    double z_final = 0.0;
    Branch final_branch = Branch::Lower;
    int outcome = 0;
    std::size_t crossings = 0; ///< steps where sign(z) left sign(z0)
};

/// RK4 integration of dz/dt = v(z, t) over a prepared timeline.
inline Trajectory integrate_trajectory(double z0, const PacketTimeline &tl,
                                       bool record = true) {
    const FieldConfig &f = tl.field();
    if (z0 == 0.0 || !std::isfinite(z0)) {
        fail(ErrorCode::BadInput, "z0 must be finite and nonzero");
    }
    Trajectory tr;
    const double h = tl.h();
    const double max_step = f.width / 10.0;
    const bool positive = z0 > 0.0;
    auto keep = [&](std::size_t k, double z) {
        if (!record) {
            return;
        }
        const auto &p = tl.half(2 * k);
        tr.times.push_back(p.t);
        tr.z.push_back(z);
        tr.v.push_back(guidance_velocity(p, z, f));
        tr.density.push_back(packet_density(p, z, f.hbar));
    };
    double z = z0;
    keep(0, z);
    for (std::size_t k = 0; k < tl.steps(); ++k) {
        const auto &p0 = tl.half(2 * k);
        const auto &pm = tl.half(2 * k + 1);
        const auto &p1 = tl.half(2 * k + 2);
        const double k1 = guidance_velocity(p0, z, f);
        const double k2 = guidance_velocity(pm, z + 0.5 * h * k1, f);
        const double k3 = guidance_velocity(pm, z + 0.5 * h * k2, f);
        const double k4 = guidance_velocity(p1, z + h * k3, f);
        const double dz = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (std::abs(dz) > max_step) {
            fail(ErrorCode::StepTooLarge, "step moved more than width/10");
        }
        z += dz;
        if ((z > 0.0) != positive || z == 0.0) {
            ++tr.crossings;
        }
        keep(k + 1, z);
    }
    tr.z_final = z;
    const auto &pf = tl.final();
    const double mid = 0.5 * (pf.up().q + pf.down().q);
    tr.final_branch = z > mid ? Branch::Upper : Branch::Lower;
    tr.outcome = branch_outcome(tr.final_branch, f.gradient);
    return tr;
}

inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kDefaultTotalTime = 5.0;

inline Trajectory integrate_trajectory(double z0, const FieldConfig &f,
                                       double dt = kDefaultDt,
                                       double total = kDefaultTotalTime) {
    if (z0 == 0.0) {
        fail(ErrorCode::BadInput, "z0 = 0 lies on the symmetry plane");
    }
    return integrate_trajectory(z0, PacketTimeline(f, dt, total));
}

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    double empirical = 0.0;
    double predicted = 0.0;
};

struct EquivarianceReport {
    std::size_t n = 0;
    double upper_fraction = 0.0;
    double upper_std_error = 0.0;
    bool upper_within_4sigma = false;
    std::size_t crossings = 0;
    double tv_distance = 0.0;
    bool degenerate = false; ///< zero gradient: the branches never separate
    std::vector<HistogramBin> bins;
};

/// Probability mass of |psi|^2 in [lo, hi).
inline double packet_mass(const SpinorPacket &s, double lo, double hi,
                          double hbar) {
    double m = 0.0;
    for (const auto &g : s.c) {
        const double sd = g.sigma(hbar) * std::numbers::sqrt2;
        m += std::norm(g.weight) *
             0.5 * (std::erf((hi - g.q) / sd) - std::erf((lo - g.q) / sd));
    }
    return m;
}

struct EnsembleOptions {
    double dt = kDefaultDt;
    double total = kDefaultTotalTime;
    std::size_t bins = 20;
    unsigned threads = 1;
};

/**
 * @brief Draws z0 from |psi_0|^2, integrates every trajectory and compares
 * the endpoints with |psi_T|^2.
 *
 * Trajectory i draws z0 from stream i of `rng`, so results do not depend
 * on the thread count.
 */
inline EquivarianceReport equivariance_check(const FieldConfig &f,
                                             std::size_t n, const Rng &rng,
                                             const EnsembleOptions &opt = {}) {
    if (n < 100) {
        fail(ErrorCode::BadInput, "equivariance check needs n >= 100");
    }
    const PacketTimeline tl(f, opt.dt, opt.total);
    std::vector<double> finals(n);
    std::vector<std::size_t> crossings(n);
    auto run = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < n; i += stride) {
            Rng r = rng.split(i);
            double z0 = 0.0;
            while (z0 == 0.0) {
                z0 = f.width * r.normal();
            }
            const auto tr = integrate_trajectory(z0, tl, false);
            finals[i] = tr.z_final;
            crossings[i] = tr.crossings;
        }
    };
    const unsigned workers =
        std::max(1U, std::min<unsigned>(opt.threads, static_cast<unsigned>(n)));
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

    EquivarianceReport rep;
    rep.n = n;
    rep.degenerate = f.gradient == 0.0;
    const auto &pf = tl.final();
    const double mid = 0.5 * (pf.up().q + pf.down().q);
    std::size_t upper = 0;
    for (std::size_t i = 0; i < n; ++i) {
        upper += finals[i] > mid;
        rep.crossings += crossings[i] > 0;
    }
    const double nd = static_cast<double>(n);
    rep.upper_fraction = static_cast<double>(upper) / nd;
    rep.upper_std_error = std::sqrt(0.25 / nd);
    rep.upper_within_4sigma =
        std::abs(rep.upper_fraction - 0.5) <= 4.0 * rep.upper_std_error;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &g : pf.c) {
        lo = std::min(lo, g.q - 5.0 * g.sigma(f.hbar));
        hi = std::max(hi, g.q + 5.0 * g.sigma(f.hbar));
    }
    const std::size_t nb = std::max<std::size_t>(opt.bins, 1);
    const double w = (hi - lo) / static_cast<double>(nb);
    rep.bins.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        rep.bins[b].lo = lo + w * static_cast<double>(b);
        rep.bins[b].hi = b + 1 == nb ? hi : lo + w * static_cast<double>(b + 1);
        rep.bins[b].predicted =
            packet_mass(pf, rep.bins[b].lo, rep.bins[b].hi, f.hbar);
    }
    double outside = 0.0;
    for (double z : finals) {
        if (z < lo || z >= hi) {
            outside += 1.0 / nd;
            continue;
        }
        const auto b = std::min(nb - 1, static_cast<std::size_t>((z - lo) / w));
        rep.bins[b].empirical += 1.0 / nd;
    }
    double inside_pred = 0.0;
    double tv = 0.0;
    for (const auto &b : rep.bins) {
        tv += std::abs(b.empirical - b.predicted);
        inside_pred += b.predicted;
    }
    tv += std::abs(outside - std::max(0.0, 1.0 - inside_pred));
    rep.tv_distance = 0.5 * tv;
    return rep;
}

} // namespace nll
