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
// Command-line front end. Every command prints JSON (or CSV where noted)
// and exits 0 on success, 1 when a verification fails, 2 on bad input.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nll/nll.hpp"

namespace {

using nll::Json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kBadInput = 2;

struct Global {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string output;
};

struct Emit {
    std::string text;
    int code = kOk;
};

// Seed resolution: --seed, then NLL_SEED, then 0.
std::uint64_t resolve_seed(const Global &g) {
    if (g.seed_given) {
        return g.seed;
    }
    if (const char *env = std::getenv("NLL_SEED"); env && *env) {
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(env, &used, 0);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != std::string(env).size()) {
            nll::fail(nll::ErrorCode::BadInput,
                      std::string("NLL_SEED is not an integer: ") + env);
        }
        return v;
    }
    return 0;
}

Json header(const char *command) {
    Json j;
    j["schema"] = nll::kSchema;
    j["command"] = command;
    return j;
}

Emit json_out(const Json &j, bool ok = true) {
    return {nll::dump17(j), ok ? kOk : kVerifyFailed};
}

Json bell_json(const nll::BellResult &r) {
    return {{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"margin", r.margin()},
            {"violated", r.violated}};
}

// ---------------------------------------------------------------------------

struct BellScanArgs {
    double grid_deg = 10.0;
    bool no_refine = false;
    std::string format = "csv";
};

Emit bell_scan(const BellScanArgs &a) {
    std::ostringstream csv;
    nll::ScanOptions opt;
    opt.grid_deg = a.grid_deg;
    opt.refine = !a.no_refine;
    std::optional<nll::CsvWriter> w;
    if (a.format == "csv") {
        w.emplace(csv, std::vector<std::string>{"phi_a", "phi_b", "phi_c",
                                                "lhs", "rhs", "margin"});
        opt.on_point = [&](const nll::CoplanarTriple &t) {
            w->row({t.phi_a, t.phi_b, t.phi_c, t.result.lhs, t.result.rhs,
                    t.result.margin()});
        };
    }
    const auto best = nll::maximize_violation(nll::singlet_correlation, opt);
    if (a.format == "csv") {
        return {csv.str(), kOk};
    }
    Json j = header("bell scan");
    j["grid_deg"] = a.grid_deg;
    j["refined"] = opt.refine;
    Json b = bell_json(best.result);
    b["phi_a"] = best.phi_a;
    b["phi_b"] = best.phi_b;
    b["phi_c"] = best.phi_c;
    j["best"] = std::move(b);
    return json_out(j);
}

struct BellCheckArgs {
    double a = 0.0;
    double b = 60.0;
    double c = 120.0;
};

Emit bell_check(const BellCheckArgs &a) {
    const auto da = nll::Direction::in_plane(a.a * std::numbers::pi / 180.0);
    const auto db = nll::Direction::in_plane(a.b * std::numbers::pi / 180.0);
    const auto dc = nll::Direction::in_plane(a.c * std::numbers::pi / 180.0);
    const auto r = nll::bell_inequality(nll::singlet_correlation, da, db, dc);
    Json j = header("bell check");
    j["phi_a"] = a.a;
    j["phi_b"] = a.b;
    j["phi_c"] = a.c;
    j["P_ab"] = nll::singlet_correlation(da, db);
    j["P_ac"] = nll::singlet_correlation(da, dc);
    j["P_bc"] = nll::singlet_correlation(db, dc);
    j.update(bell_json(r));
    return json_out(j);
}

struct BellLhvArgs {
    std::string strategy = "sign";
    std::size_t samples = 100000;
    double a = 0.0;
    double b = 60.0;
    double c = 120.0;
    unsigned threads = 1;
};

Emit bell_lhv(const BellLhvArgs &a, std::uint64_t seed) {
    const auto strat = a.strategy == "sign" ? nll::LHVStrategy::sign_model()
                                            : nll::LHVStrategy::constant();
    const auto da = nll::Direction::in_plane(a.a * std::numbers::pi / 180.0);
    const auto db = nll::Direction::in_plane(a.b * std::numbers::pi / 180.0);
    const auto dc = nll::Direction::in_plane(a.c * std::numbers::pi / 180.0);
    const nll::LHVOptions opt{a.samples, seed, a.threads};
    const auto r = nll::lhv_bell_check(strat, {}, da, db, dc, opt);
    const auto same = nll::lhv_correlation(strat, {}, da, da, opt);
    Json j = header("bell lhv");
    j["strategy"] = strat.name();
    j["samples"] = a.samples;
    j["seed"] = seed;
    j["P_ab"] = {{"mean", r.ab.mean}, {"std_error", r.ab.std_error}};
    j["P_ac"] = {{"mean", r.ac.mean}, {"std_error", r.ac.std_error}};
    j["P_bc"] = {{"mean", r.bc.mean}, {"std_error", r.bc.std_error}};
    j["P_aa"] = same.mean;
    j["lhs"] = r.lhs;
    j["intermediate_bound"] = r.intermediate_bound;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin();
    j["sigma"] = r.sigma;
    j["violated_4sigma"] = r.violated;
    return json_out(j, !r.violated && same.mean == -1.0);
}

// ---------------------------------------------------------------------------

struct KsColorArgs {
    std::string file;
    unsigned parallel = 1;
};

Emit ks_color_cmd(const KsColorArgs &a) {
    const auto dirs = nll::load_directions(a.file);
    if (dirs.empty()) {
        nll::fail(nll::ErrorCode::BadInput, a.file + ": no directions");
    }
    const auto g = nll::build_triad_graph(dirs);
    const auto r = nll::ks_color(g, std::max(1U, a.parallel));
    Json j = nll::coloring_certificate(g, r);
    const bool ok = !r.coloring || j["violations"].empty();
    return json_out(j, ok);
}

Emit ks_paper_triple() {
    auto dirs = nll::coordinate_axes();
    const auto triple = nll::octant_counterexample_triple();
    dirs.insert(dirs.end(), triple.begin(), triple.end());
    const auto g = nll::build_triad_graph(dirs);
    const auto c = nll::octant_coloring(g);
    const auto bad = nll::verify_coloring(g, c);
    Json j = header("ks paper-triple");
    Json d = Json::array();
    for (std::size_t i = 0; i < g.directions.size(); ++i) {
        d.push_back({{"vector", nll::to_json(g.directions[i])},
                     {"color", c[i] == 0 ? "red" : "blue"},
                     {"value", c[i]}});
    }
    j["directions"] = std::move(d);
    j["triads"] = g.triads.size();
    Json v = Json::array();
    bool triple_hit = false;
    for (const auto &t : bad) {
        v.push_back({t[0], t[1], t[2]});
        bool in_triple = true;
        for (std::size_t k : t) {
            in_triple = in_triple && nll::norm(g.directions[k]) > 0 &&
                        std::any_of(triple.begin(), triple.end(),
                                    [&](const nll::Vec3 &w) {
                                        return std::abs(std::abs(nll::dot(
                                                   w, g.directions[k])) - 1.0) <
                                               1e-12;
                                    });
        }
        triple_hit = triple_hit || in_triple;
    }
    j["violated_triads"] = std::move(v);
    j["triple_violated"] = triple_hit;
    return json_out(j, triple_hit);
}

// ---------------------------------------------------------------------------

Emit mermin_cmd() {
    const auto rep = nll::mermin_check();
    Json j = header("mermin");
    Json rows = Json::array();
    for (const auto &a : rep.assignments) {
        Json r;
        for (std::size_t k = 0; k < nll::kMerminCount; ++k) {
            r[nll::kMerminLabels[k]] = a.values[k];
        }
        r["CZ"] = a.cz;
        rows.push_back(std::move(r));
    }
    j["assignments"] = std::move(rows);
    const bool constant = rep.min_cz == rep.max_cz;
    j["assignments_all"] = constant ? Json(rep.min_cz) : Json("mixed");
    const double trace = rep.operator_product.trace().real() / 4.0;
    j["operator_product"] = std::lround(trace);
    j["operator_product_error"] = rep.product_error;
    Json sets = Json::array();
    bool sets_ok = true;
    const auto ctx = nll::mermin_contexts();
    const auto cs = nll::commuting_sets_mermin();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const bool ok = nll::check_spectrum_constraints(cs[i]);
        sets_ok = sets_ok && ok;
        sets.push_back({{"relation", ctx[i].relation},
                        {"commuting", true},
                        {"spectrum_constraints", ok}});
    }
    j["commuting_sets"] = std::move(sets);
    const bool ok = constant && rep.min_cz == 1 && rep.product_error <= 1e-12 &&
                    sets_ok;
    j["contradiction"] = ok;
    return json_out(j, ok);
}

// ---------------------------------------------------------------------------

struct EntangleArgs {
    std::size_t dim = 3;
    std::size_t trials = 20;
};

Emit entangle_verify(const EntangleArgs &a, std::uint64_t seed) {
    if (a.dim < 1) {
        nll::fail(nll::ErrorCode::BadInput, "--dim must be positive");
    }
    nll::Rng rng(seed);
    const nll::AntiUnitaryMap u(nll::random_unitary(a.dim, rng));
    const auto s = nll::me_state(u);
    double residual = 0.0;
    for (std::size_t t = 0; t < a.trials; ++t) {
        const nll::HermitianOperator op(nll::random_hermitian(a.dim, rng), "A");
        residual = std::max(residual, nll::perfect_correlation_residual(s, op));
    }
    double basis = 0.0;
    for (std::size_t t = 0; t < a.trials; ++t) {
        const auto other = nll::me_state(u, nll::random_unitary(a.dim, rng));
        basis = std::max(basis,
                         nll::max_abs_diff(s.state.amps(), other.state.amps()));
    }
    const auto sc = nll::schmidt_coefficients(s.state);
    double schmidt = 0.0;
    for (double c : sc) {
        schmidt = std::max(schmidt, std::abs(c - 1.0 / std::sqrt(double(a.dim))));
    }
    Json j = header("entangle verify");
    j["dim"] = a.dim;
    j["trials"] = a.trials;
    j["seed"] = seed;
    j["max_residual"] = residual;
    j["basis_invariance_residual"] = basis;
    j["schmidt_deviation"] = schmidt;
    return json_out(j, residual <= nll::kTol && basis <= nll::kTol &&
                           schmidt <= nll::kTol);
}

// ---------------------------------------------------------------------------

struct KsDemoArgs {
    std::size_t dim = 3;
    std::string dirs;
    unsigned parallel = 1;
};

Emit schrodinger_ks(const KsDemoArgs &a) {
    const auto dirs = a.dirs.empty() ? nll::peres33() : nll::load_directions(a.dirs);
    const auto rep = nll::schrodinger_ks_demo(a.dim, dirs, std::max(1U, a.parallel));
    Json j = header("schrodinger ks-demo");
    j["dim"] = a.dim;
    j["directions"] = rep.directions;
    j["triads"] = rep.graph.triads.size();
    j["residual_max"] = rep.residual_max;
    if (rep.coloring.colorable()) {
        j["coloring"] = nll::coloring_certificate(rep.graph, rep.coloring);
    } else {
        j["coloring"] = "UNCOLORABLE";
    }
    j["nodes"] = rep.coloring.nodes;
    j["contradiction"] = rep.contradiction;
    j["narrative"] = rep.narrative;
    return json_out(j, rep.residual_max < nll::kTol);
}

struct MerminDemoArgs {
    std::size_t dim = 4;
    std::size_t trials = 1000;
};

Emit schrodinger_mermin(const MerminDemoArgs &a, std::uint64_t seed) {
    nll::Rng rng(seed);
    const auto rep = nll::schrodinger_mermin_demo(a.dim, a.trials, rng);
    Json j = header("schrodinger mermin-demo");
    j["dim"] = a.dim;
    j["trials"] = a.trials;
    j["seed"] = seed;
    j["residual_max"] = rep.residual_max;
    j["equality_rate"] = rep.equality_rate;
    j["max_marginal_shift_sigma"] = rep.max_marginal_shift_sigma;
    Json ctx = Json::array();
    for (const auto &c : rep.contexts) {
        ctx.push_back({{"observable", c.observable},
                       {"context", c.context},
                       {"trials", c.trials},
                       {"equal", c.equal},
                       {"partner_plus_fraction", c.partner_plus_fraction()}});
    }
    j["contexts"] = std::move(ctx);
    j["value_map_cz"] = rep.value_map.min_cz == rep.value_map.max_cz
                            ? Json(rep.value_map.min_cz)
                            : Json("mixed");
    j["operator_cz"] = -1;
    return json_out(j, rep.equality_rate == 1.0 && rep.residual_max < nll::kTol);
}

struct ConditionalArgs {
    std::size_t dim = 4;
    std::size_t kept = 10000;
    double a = 0.0;
    double b = 60.0;
};

Emit schrodinger_conditional(const ConditionalArgs &a, std::uint64_t seed) {
    nll::Rng rng(seed);
    const auto s = nll::bellext_state(a.dim);
    const auto da = nll::Direction::from_degrees(a.a, 0.0);
    const auto db = nll::Direction::from_degrees(a.b, 0.0);
    const auto r = nll::conditional_correlation(s, da, db, {0, 1}, a.kept, rng);
    const double quantum = -nll::dot(da, db);
    Json j = header("schrodinger conditional");
    j["dim"] = a.dim;
    j["theta_a"] = a.a;
    j["theta_b"] = a.b;
    j["seed"] = seed;
    j["estimate"] = r.estimate.mean;
    j["std_error"] = r.estimate.std_error;
    j["kept"] = r.kept;
    j["attempted"] = r.attempted;
    j["keep_fraction"] = r.keep_fraction;
    j["analytic"] = r.analytic;
    j["minus_a_dot_b"] = quantum;
    const double tol = 4.0 * r.estimate.std_error + 1e-12;
    return json_out(j, std::abs(r.estimate.mean - r.analytic) <= tol);
}

// ---------------------------------------------------------------------------

struct VnArgs {
    std::string state = "random";
    std::size_t dim = 3;
};

Emit vn_reconstruct_cmd(const VnArgs &a, std::uint64_t seed) {
    nll::Rng rng(seed);
    nll::CMatrix expected;
    nll::LinearFunctional e;
    if (a.state == "random") {
        const auto psi = nll::random_state({a.dim}, rng);
        expected = nll::outer(psi.amps(), psi.amps());
        e = nll::pure_state_functional(psi);
    } else {
        expected = nll::CMatrix::identity(a.dim) * nll::Complex(1.0 / double(a.dim));
        e = nll::maximally_mixed_functional(a.dim);
    }
    const auto rep = nll::vn_reconstruct(a.dim, e, rng);
    const double err = nll::max_abs_diff(rep.density, expected);
    Json j = header("vn reconstruct");
    j["state"] = a.state;
    j["dim"] = a.dim;
    j["seed"] = seed;
    j["reconstruction_error"] = err;
    j["roundtrip_error"] = rep.roundtrip_error;
    j["trace"] = {rep.trace.real(), rep.trace.imag()};
    j["trace_is_one"] = rep.trace_is_one;
    j["hermitian"] = rep.hermitian;
    j["min_expectation"] = rep.min_expectation;
    j["positive"] = rep.positive;
    return json_out(j, err <= nll::kTol && rep.trace_is_one && rep.positive);
}

Emit vn_linearity(std::uint64_t seed) {
    nll::Rng rng(seed);
    const auto rep = nll::linearity_counterexamples(rng);
    Json j = header("vn linearity");
    j["seed"] = seed;
    j["sigma_prime_eigenvalues"] = rep.sigma_prime_eigenvalues;
    Json rows = Json::array();
    for (const auto &r : rep.spin_rows) {
        rows.push_back({{"v_sx", r.v_sx},
                        {"v_sy", r.v_sy},
                        {"required", r.required},
                        {"satisfiable", r.satisfiable}});
    }
    j["spin_rows"] = std::move(rows);
    j["spin_satisfying"] = rep.spin_satisfying;
    j["oscillator_samples"] = rep.oscillator_samples.size();
    j["oscillator_odd_hits"] = rep.oscillator_odd_hits;
    j["oscillator_levels"] = rep.oscillator_levels;
    j["oscillator_numeric"] = rep.oscillator_numeric;
    j["oscillator_level_error"] = rep.oscillator_level_error;
    return json_out(j, rep.spin_satisfying == 0 &&
                           rep.oscillator_level_error <= 1e-8);
}

// ---------------------------------------------------------------------------

struct BohmRunArgs {
    double z0 = 0.3;
    double gradient = -5.0;
    double dt = nll::kDefaultDt;
    double total = nll::kDefaultTotalTime;
    std::string format = "csv";
};

Emit bohm_run(const BohmRunArgs &a) {
    nll::FieldConfig f;
    f.gradient = a.gradient;
    const auto tr = nll::integrate_trajectory(a.z0, f, a.dt, a.total);
    if (a.format == "csv") {
        std::ostringstream out;
        nll::CsvWriter w(out, {"t", "z", "v", "density"});
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            w.row({tr.times[i], tr.z[i], tr.v[i], tr.density[i]});
        }
        return {out.str(), tr.crossings == 0 ? kOk : kVerifyFailed};
    }
    Json j = header("bohm run");
    j["z0"] = a.z0;
    j["gradient"] = a.gradient;
    j["dt"] = a.dt;
    j["T"] = a.total;
    j["z_final"] = tr.z_final;
    j["branch"] = nll::to_string(tr.final_branch);
    j["outcome"] = tr.outcome;
    j["crossings"] = tr.crossings;
    return json_out(j, tr.crossings == 0);
}

struct BohmEnsembleArgs {
    std::size_t n = 1000;
    double gradient = -5.0;
    double dt = nll::kDefaultDt;
    double total = nll::kDefaultTotalTime;
    unsigned threads = 1;
};

Emit bohm_ensemble(const BohmEnsembleArgs &a, std::uint64_t seed) {
    nll::FieldConfig f;
    f.gradient = a.gradient;
    nll::EnsembleOptions opt;
    opt.dt = a.dt;
    opt.total = a.total;
    opt.threads = std::max(1U, a.threads);
    const auto rep = nll::equivariance_check(f, a.n, nll::Rng(seed), opt);
    Json j = header("bohm ensemble");
    j["n"] = a.n;
    j["gradient"] = a.gradient;
    j["seed"] = seed;
    j["upper_fraction"] = rep.upper_fraction;
    j["upper_std_error"] = rep.upper_std_error;
    j["tv_distance"] = rep.tv_distance;
    j["crossings"] = rep.crossings;
    j["degenerate"] = rep.degenerate;
    Json bins = Json::array();
    for (const auto &b : rep.bins) {
        bins.push_back({{"lo", b.lo},
                        {"hi", b.hi},
                        {"empirical", b.empirical},
                        {"predicted", b.predicted}});
    }
    j["bins"] = std::move(bins);
    return json_out(j, rep.crossings == 0 && rep.upper_within_4sigma);
}

int exit_code_for(nll::ErrorCode c) {
    switch (c) {
    case nll::ErrorCode::BadInput:
    case nll::ErrorCode::BadIndices:
    case nll::ErrorCode::DimMismatch:
    case nll::ErrorCode::NegativeTime:
    case nll::ErrorCode::ZeroState:
    case nll::ErrorCode::NotHermitian:
    case nll::ErrorCode::BasisNotOrthonormal:
        return kBadInput;
    default:
        return kVerifyFailed;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Checks of hidden-variable no-go arguments", "nll"};
    app.require_subcommand(1);
    Global g;
    app.add_option_function<std::uint64_t>(
        "--seed",
        [&](std::uint64_t s) {
            g.seed = s;
            g.seed_given = true;
        },
        "RNG seed (default: $NLL_SEED, else 0)");
    app.add_option("-o,--output", g.output, "Write output to this file");

    std::function<Emit(std::uint64_t)> action;

    auto *bell = app.add_subcommand("bell", "Bell inequality")->require_subcommand(1);
    BellScanArgs scan;
    auto *scan_cmd = bell->add_subcommand("scan", "Scan coplanar triples");
    scan_cmd->add_option("--grid-deg", scan.grid_deg, "Grid spacing in degrees")
        ->check(CLI::PositiveNumber);
    scan_cmd->add_flag("--no-refine", scan.no_refine, "Skip local refinement");
    scan_cmd->add_option("--format", scan.format)
        ->check(CLI::IsMember({"csv", "json"}));
    scan_cmd->callback([&] { action = [&](std::uint64_t) { return bell_scan(scan); }; });

    BellCheckArgs check;
    auto *check_cmd = bell->add_subcommand("check", "Quantum correlations at one triple");
    check_cmd->add_option("--a", check.a, "Angle of a in the x-y plane (degrees)");
    check_cmd->add_option("--b", check.b, "Angle of b (degrees)");
    check_cmd->add_option("--c", check.c, "Angle of c (degrees)");
    check_cmd->callback([&] { action = [&](std::uint64_t) { return bell_check(check); }; });

    BellLhvArgs lhv;
    auto *lhv_cmd = bell->add_subcommand("lhv", "Sampled local hidden-variable model");
    lhv_cmd->add_option("--strategy", lhv.strategy)
        ->check(CLI::IsMember({"sign", "const"}));
    lhv_cmd->add_option("--samples", lhv.samples)->check(CLI::PositiveNumber);
    lhv_cmd->add_option("--a", lhv.a);
    lhv_cmd->add_option("--b", lhv.b);
    lhv_cmd->add_option("--c", lhv.c);
    lhv_cmd->add_option("--threads", lhv.threads);
    lhv_cmd->callback([&] { action = [&](std::uint64_t s) { return bell_lhv(lhv, s); }; });

    auto *ks = app.add_subcommand("ks", "Kochen-Specker colorings")->require_subcommand(1);
    KsColorArgs color;
    auto *color_cmd = ks->add_subcommand("color", "Search for a 0/1 coloring");
    color_cmd->add_option("--file", color.file, "Direction file")->required();
    color_cmd->add_option("--parallel", color.parallel, "Worker threads");
    color_cmd->callback([&] { action = [&](std::uint64_t) { return ks_color_cmd(color); }; });
    ks->add_subcommand("paper-triple", "Octant coloring on an orthogonal triple")
        ->callback([&] { action = [](std::uint64_t) { return ks_paper_triple(); }; });

    app.add_subcommand("mermin", "Mermin's parity argument")
        ->callback([&] { action = [](std::uint64_t) { return mermin_cmd(); }; });

    auto *ent = app.add_subcommand("entangle", "Maximally entangled states")
                    ->require_subcommand(1);
    EntangleArgs ea;
    auto *ev = ent->add_subcommand("verify", "Perfect correlations and basis invariance");
    ev->add_option("--dim", ea.dim)->check(CLI::Range(1, 40));
    ev->add_option("--trials", ea.trials);
    ev->callback([&] { action = [&](std::uint64_t s) { return entangle_verify(ea, s); }; });

    auto *sch = app.add_subcommand("schrodinger", "Perfect-correlation demonstrations")
                    ->require_subcommand(1);
    KsDemoArgs kd;
    auto *kd_cmd = sch->add_subcommand("ks-demo", "Kochen-Specker via perfect correlations");
    kd_cmd->add_option("--dim", kd.dim)->check(CLI::Range(3, 12));
    kd_cmd->add_option("--dirs", kd.dirs, "Direction file (default: Peres 33)");
    kd_cmd->add_option("--parallel", kd.parallel);
    kd_cmd->callback([&] { action = [&](std::uint64_t) { return schrodinger_ks(kd); }; });
    MerminDemoArgs md;
    auto *md_cmd = sch->add_subcommand("mermin-demo", "Mermin via perfect correlations");
    md_cmd->add_option("--dim", md.dim)->check(CLI::Range(4, 8));
    md_cmd->add_option("--trials", md.trials);
    md_cmd->callback([&] { action = [&](std::uint64_t s) { return schrodinger_mermin(md, s); }; });
    ConditionalArgs ca;
    auto *ca_cmd = sch->add_subcommand("conditional", "Conditional correlation on a 2-d block");
    ca_cmd->add_option("--dim", ca.dim)->check(CLI::Range(2, 16));
    ca_cmd->add_option("--kept", ca.kept, "Kept trials to collect")
        ->check(CLI::PositiveNumber);
    ca_cmd->add_option("--a", ca.a, "Polar angle of a in the x-z plane (degrees)");
    ca_cmd->add_option("--b", ca.b, "Polar angle of b (degrees)");
    ca_cmd->callback([&] { action = [&](std::uint64_t s) { return schrodinger_conditional(ca, s); }; });

    auto *vn = app.add_subcommand("vn", "von Neumann's reconstruction")->require_subcommand(1);
    VnArgs va;
    auto *vr = vn->add_subcommand("reconstruct", "Density matrix from an expectation functional");
    vr->add_option("--state", va.state)->check(CLI::IsMember({"random", "mixed"}));
    vr->add_option("--dim", va.dim)->check(CLI::Range(1, 40));
    vr->callback([&] { action = [&](std::uint64_t s) { return vn_reconstruct_cmd(va, s); }; });
    vn->add_subcommand("linearity", "Linearity counterexamples")
        ->callback([&] { action = [](std::uint64_t s) { return vn_linearity(s); }; });

    auto *bohm = app.add_subcommand("bohm", "Bohmian Stern-Gerlach")->require_subcommand(1);
    BohmRunArgs br;
    auto *br_cmd = bohm->add_subcommand("run", "One trajectory");
    br_cmd->add_option("--z0", br.z0);
    br_cmd->add_option("--gradient", br.gradient);
    br_cmd->add_option("--dt", br.dt)->check(CLI::PositiveNumber);
    br_cmd->add_option("--T", br.total, "Total time");
    br_cmd->add_option("--format", br.format)->check(CLI::IsMember({"csv", "json"}));
    br_cmd->callback([&] { action = [&](std::uint64_t) { return bohm_run(br); }; });
    BohmEnsembleArgs be;
    auto *be_cmd = bohm->add_subcommand("ensemble", "Equivariance check");
    be_cmd->add_option("--n", be.n);
    be_cmd->add_option("--gradient", be.gradient);
    be_cmd->add_option("--dt", be.dt)->check(CLI::PositiveNumber);
    be_cmd->add_option("--T", be.total, "Total time");
    be_cmd->add_option("--threads", be.threads);
    be_cmd->callback([&] { action = [&](std::uint64_t s) { return bohm_ensemble(be, s); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kBadInput;
    }

    try {
        const Emit out = action(resolve_seed(g));
        if (g.output.empty()) {
            std::cout << out.text;
        } else {
            std::ofstream f(g.output);
            if (!f) {
                std::cerr << "error: cannot write " << g.output << '\n';
                return kBadInput;
            }
            f << out.text;
        }
        return out.code;
    } catch (const nll::Error &e) {
        std::cerr << "error: " << nll::to_string(e.code()) << ": " << e.what()
                  << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
}
