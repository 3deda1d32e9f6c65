// Copyright 2026 The symmqvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: acceptance [--out DIR] [--only SUBSTRING]
// Training runs write their outputs under DIR (default: a fresh temp directory).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "random_circuits.hpp"
#include "symmqvar/commands.hpp"
#include "symmqvar/datasets.hpp"
#include "symmqvar/dense.hpp"
#include "symmqvar/embedding.hpp"
#include "symmqvar/io.hpp"
#include "symmqvar/model.hpp"
#include "symmqvar/symmetry.hpp"
#include "symmqvar/vqe.hpp"
#include "ttt_oracle.hpp"

namespace fs = std::filesystem;
using namespace symmqvar;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Context {
    fs::path out_dir;
    std::size_t threads = 1;
    std::vector<VqeResult> vqe_results;  // every VQE run, for the variational-bound check
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- symmetry

std::vector<PauliSum> standard_two_qubit_gateset() {
    std::vector<PauliSum> g;
    for (const char *w : {"XI", "YI", "ZI", "IX", "IY", "IZ", "ZZ"}) {
        g.push_back(PauliSum(2, {{w, 1.0}}));
    }
    return g;
}

Outcome twirl_exactness(Context &) {
    const PauliSum xs(2, {{"XI", 0.5}, {"IX", 0.5}}), ys(2, {{"YI", 0.5}, {"IY", 0.5}}),
        zs(2, {{"ZI", 0.5}, {"IZ", 0.5}}), zz(2, {{"ZZ", 1.0}});
    const PauliSum x1(2, {{"XI", 1.0}}), x2(2, {{"IX", 1.0}});
    const auto gs = standard_two_qubit_gateset();
    const bool exchange = symmetrize_gateset(gs, make_exchange_rep()).generators == std::vector{xs, ys, zs, zz};
    const bool signflip = symmetrize_gateset(gs, make_signflip_rep()).generators == std::vector{x1, x2, zz};
    const bool klein = symmetrize_gateset(gs, make_klein_rep()).generators == std::vector{xs, zz};
    return {exchange && signflip && klein, std::string("exchange ") + (exchange ? "ok" : "MISMATCH") + ", sign flip " +
                                               (signflip ? "ok" : "MISMATCH") + ", both " +
                                               (klein ? "ok" : "MISMATCH")};
}

Outcome twirl_properties(Context &) {
    std::mt19937_64 rng(101);
    const std::vector<SymmetryRep> reps = {make_klein_rep(), make_exchange_rep(), make_signflip_rep(),
                                           make_parity_rep(4), make_d4_rep(),    make_z4_rep(),
                                           make_trivial_rep(4)};
    double worst_idem = 0, worst_comm = 0;
    std::size_t checked = 0;
    for (const auto &rep : reps) {
        for (int k = 0; k < 200; k++) {
            const PauliSum op = testing::random_pauli_sum(rng, rep.num_qubits, 1 + k % 8);
            const PauliSum t = twirl_finite(rep, op);
            worst_idem = std::max(worst_idem, twirl_finite(rep, t).max_coeff_diff(t));
            worst_comm = std::max(worst_comm, check_commutes(t, rep, 1e-10).max_violation);
            checked++;
        }
    }
    return {worst_idem <= 1e-12 && worst_comm < 1e-10,
            std::to_string(checked) + " operators over " + std::to_string(reps.size()) +
                " reps, max idempotence error " + fmt(worst_idem) + ", max commutator " + fmt(worst_comm)};
}

Outcome haar_twirl(Context &) {
    std::mt19937_64 rng(102);
    const std::string letters = "XYZ";
    std::vector<PauliSum> ops;
    std::vector<DenseMatrix> mats, acc;
    for (char a : letters) {
        for (char b : letters) {
            ops.push_back(PauliSum(2, {{std::string{a, b}, 1.0}}));
            mats.push_back(dense_matrix(ops.back(), 2));
            acc.push_back(DenseMatrix::Zero(4, 4));
        }
    }
    const std::size_t samples = 100000;
    for (std::size_t s = 0; s < samples; s++) {
        const DenseMatrix v = testing::haar_unitary_2(rng);
        DenseMatrix vv(4, 4);
        for (int i = 0; i < 2; i++) {
            for (int j = 0; j < 2; j++) {
                vv.block(2 * i, 2 * j, 2, 2) = v(i, j) * v;
            }
        }
        for (std::size_t k = 0; k < mats.size(); k++) {
            acc[k] += vv * mats[k] * vv.adjoint();
        }
    }
    double worst = 0;
    for (std::size_t k = 0; k < ops.size(); k++) {
        DenseMatrix mc = acc[k] / static_cast<double>(samples);
        mc = (mc + mc.adjoint()).eval() / 2.0;
        const PauliSum estimate = pauli_decompose(mc, 0.0).without_identity();
        worst = std::max(worst, estimate.max_coeff_diff(twirl_haar_local(HaarTwirlSpec{2}, ops[k])));
    }
    // Closed form for XX, and the SWAP weight 2/3 read off its XX coefficient.
    const PauliSum xx = twirl_haar_local(HaarTwirlSpec{2}, PauliSum(2, {{"XX", 1.0}}));
    const PauliSum third(2, {{"XX", 1.0 / 3}, {"YY", 1.0 / 3}, {"ZZ", 1.0 / 3}});
    const double exact_err = xx.max_coeff_diff(third);
    const double swap_weight = 2 * xx.coefficient("XX");
    return {worst < 1e-2 && exact_err == 0.0 && std::abs(swap_weight - 2.0 / 3) < 1e-15,
            "Monte Carlo (1e5 samples) max deviation " + fmt(worst) + " over 9 pairs; XX -> (XX+YY+ZZ)/3 error " +
                fmt(exact_err) + ", SWAP weight " + fmt(swap_weight)};
}

// ---------------------------------------------------------------- embeddings

Outcome embedding_equivariance(Context &) {
    double worst = 0;
    bool ok = true;
    auto take = [&](const EquivarianceReport &r) {
        ok = ok && r.pass;
        worst = std::max(worst, r.max_deviation);
    };
    const auto board = EmbeddingSpec::feature_wise('X', 2 * std::numbers::pi / 3, 9, 9);
    for (const auto &g : make_d4_rep().elements) {
        take(verify_equivariance(board, permutation_action(g), g, 20, 1e-9));
    }
    const auto z2 = EmbeddingSpec::feature_wise('Z', 1.0, 2, 2);
    const auto swap = GroupElement::permutation({1, 0});
    const DataAction negate = [](std::span<const double> x) { return std::vector<double>{-x[0], -x[1]}; };
    take(verify_equivariance(z2, permutation_action(swap), swap, 50, 1e-9));
    take(verify_equivariance(z2, negate, GroupElement::pauli(PauliString("XX")), 50, 1e-9));
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    for (int k = 0; k < 100; k++) {
        const double a = u(rng), b = u(rng), c = u(rng);
        take(verify_equivariance(EmbeddingSpec::so3(1), linear_action(so3_rotation(a, b, c)),
                                 euler_unitary(-a, -b, -c, 1), 5, 1e-9, k));
        take(verify_equivariance(EmbeddingSpec::o3(2), linear_action(so3_rotation(a, b, c)),
                                 euler_unitary(-a, -b, -c, 2), 5, 1e-9, k));
    }
    take(verify_equivariance(EmbeddingSpec::o3(2), linear_action(-Eigen::Matrix3d::Identity()),
                             GroupElement::pauli(PauliString("IZ")), 50, 1e-9));
    return {ok, "D4 on the 9-qubit board (8 elements), Klein example, SO(3)/O(3) over 100 Euler triples and the "
                "inflection; max deviation " +
                    fmt(worst)};
}

// ---------------------------------------------------------------- models

Outcome model_invariance(Context &) {
    std::mt19937_64 rng(104);
    const auto games = enumerate_ttt();
    const auto scenarios = enumerate_driving();
    const auto ttt = build_ttt_model(2, 2, "tcemoid", true);
    const auto drv = build_driving_model(2, 2, "tcemoid", true);
    double worst_ttt = 0, worst_drv = 0;
    for (int k = 0; k < 100; k++) {
        std::vector<std::vector<double>> boards, grids;
        for (int i = 0; i < 20; i++) {
            boards.push_back(games[rng() % games.size()].features());
            grids.push_back(scenarios[rng() % scenarios.size()].features());
        }
        worst_ttt = std::max(worst_ttt, check_model_invariance(ttt, testing::random_params(rng, ttt.param_count()),
                                                               boards, make_d4_rep()));
        worst_drv = std::max(worst_drv, check_model_invariance(drv, testing::random_params(rng, drv.param_count()),
                                                               grids, make_z4_rep()));
    }
    return {worst_ttt < 1e-9 && worst_drv < 1e-9, "100 parameter vectors x 20 inputs; tic-tac-toe (2,2) under D4 " +
                                                      fmt(worst_ttt) + ", driving (2,2) under Z4 " + fmt(worst_drv)};
}

json load_config(const std::string &text) { return json::parse(text); }

Outcome gradient_correctness(Context &ctx) {
    std::mt19937_64 rng(105);
    double worst_circuit = 0;
    for (int k = 0; k < 50; k++) {
        const std::size_t n = 1 + k % 5;
        const Circuit c = testing::random_circuit(rng, n, 6 + k % 10);
        const auto params = testing::random_params(rng, c.param_count());
        PauliSum obs = testing::random_pauli_sum(rng, n, 3);
        const StateVector init = testing::random_state(rng, n);
        const auto adj = gradient_adjoint(c, params, obs, &init);
        const auto fd = testing::finite_difference_gradient(c, params, obs, &init);
        worst_circuit = std::max(worst_circuit, testing::relative_error(adj, fd));
    }
    double worst_train = 0;
    std::size_t checkpoints = 0, runs = 0;
    bool three_each = true;
    for (const char *cfg : {R"({"task": "ttt", "grid": [[1, 1]], "seeds": [0], "epochs": 2, "gradient_checks": 3})",
                            R"({"task": "driving", "grid": [[1, 1]], "seeds": [0], "steps": 3, "gradient_checks": 3})"}) {
        std::ostringstream log;
        RunOptions opts{ctx.out_dir / ("gradient_smoke_" + std::to_string(runs)), ctx.threads, false, &log};
        const json manifest = cmd_train(load_config(cfg), opts);
        for (const auto &run : manifest["runs"]) {
            runs++;
            three_each = three_each && run["gradient_check_errors"].size() == 3;
            for (double e : run["gradient_check_errors"]) {
                worst_train = std::max(worst_train, e);
                checkpoints++;
            }
        }
    }
    return {worst_circuit < 1e-6 && worst_train < 1e-6 && three_each,
            "50 random circuits max relative error " + fmt(worst_circuit) + "; " + std::to_string(checkpoints) +
                " checkpoints over " + std::to_string(runs) + " smoke runs max " + fmt(worst_train)};
}

struct GenResult {
    double delta_test = 0, delta_train = 0, inv_test = 0, free_test = 0;
    double seconds = 0;
};

GenResult run_generalization(Context &ctx, std::size_t epochs, const std::string &tag) {
    const auto start = std::chrono::steady_clock::now();
    json cfg = json::parse(R"({"task": "ttt", "grid": [[2, 2]], "seeds": [0, 1, 2, 3, 4]})");
    cfg["epochs"] = epochs;
    std::ostringstream log;
    const json manifest = cmd_train(cfg, RunOptions{ctx.out_dir / tag, ctx.threads, false, &log});
    const json &d = manifest["deltas"].at(0);
    GenResult r;
    r.delta_test = d["delta_test_acc"];
    r.delta_train = d["delta_train_acc"];
    r.inv_test = d["invariant_test_acc"];
    r.free_test = d["free_test_acc"];
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

Outcome generalization(Context &ctx) {
    const GenResult smoke = run_generalization(ctx, 10, "generalization_smoke");
    const GenResult full = run_generalization(ctx, 100, "generalization_full");
    const bool full_ok = full.delta_test > 0.02 && std::abs(full.delta_train) <= 0.1;
    const bool same_sign = (smoke.delta_test > 0) == (full.delta_test > 0);
    const bool smoke_fast = smoke.seconds <= 15 * 60;
    std::string detail = "(2,2), 5 seeds, 100 epochs: invariant test acc " + fmt(full.inv_test) + ", free " +
                         fmt(full.free_test) + ", delta " + fmt(full.delta_test) + " (needs > 0.02), train delta " +
                         fmt(full.delta_train) + " (needs within 0.1); 10-epoch smoke delta " +
                         fmt(smoke.delta_test) + " in " + fmt(smoke.seconds) + " s, sign " +
                         (same_sign ? "agrees" : "DISAGREES") + " (indicative only)";
    return {full_ok && same_sign && smoke_fast, detail};
}

// ---------------------------------------------------------------- VQE

Outcome tfim_threshold(Context &ctx) {
    bool ok = true;
    std::string detail;
    VqeOptions opts;
    for (std::size_t n : {4u, 6u}) {
        const Hamiltonian h = build_hamiltonian("tfim", n);
        opts.exact_energy = exact_ground_energy(h);
        for (std::size_t p = 1; p <= n / 2; p++) {
            double best = std::numeric_limits<double>::infinity();
            for (std::uint64_t seed = 0; seed < 20; seed++) {
                ctx.vqe_results.push_back(minimize_energy(h, {AnsatzFamily::Qaoa, n, p}, seed, opts));
                best = std::min(best, ctx.vqe_results.back().energy);
            }
            const double rel = std::abs(best - *opts.exact_energy) / std::abs(*opts.exact_energy);
            const bool cell_ok = p == n / 2 ? rel < 1e-4 : rel > 1e-3;
            ok = ok && cell_ok;
            detail += (detail.empty() ? "" : ", ") + std::string("N=") + std::to_string(n) + " p=" +
                      std::to_string(p) + " rel err " + fmt(rel) + (cell_ok ? "" : " (!)");
        }
    }
    return {ok, "best of 20 seeds: " + detail};
}

Outcome ansatz_consistency(Context &) {
    bool ok = true;
    for (std::size_t n : {2u, 4u, 6u, 10u}) {
        ok = ok && symmetrize_gateset(family_gateset({AnsatzFamily::QaoaPrime, n, 1}), make_parity_rep(n)).generators ==
                       family_gateset({AnsatzFamily::Qaoa, n, 1});
    }
    const bool qaoa_ok = ok;
    bool heis_ok = true;
    for (std::size_t n : {4u, 6u, 8u}) {
        const auto twirled = symmetrize_gateset(family_gateset({AnsatzFamily::HeisFree, n, 1}), HaarTwirlSpec{n});
        const auto target = family_gateset({AnsatzFamily::HeisEquivariant, n, 1});
        heis_ok = heis_ok && twirled.generators.size() == target.size();
        for (std::size_t i = 0; heis_ok && i < target.size(); i++) {
            double ratio = 0;
            heis_ok = proportional(twirled.generators[i], target[i], &ratio) && ratio > 0;
        }
    }
    const std::size_t per_layer[] = {2, 3, 7, 2, 34, 9};
    const AnsatzFamily families[] = {AnsatzFamily::Qaoa,      AnsatzFamily::QaoaPrime,
                                     AnsatzFamily::HeisFree,  AnsatzFamily::HeisEquivariant,
                                     AnsatzFamily::LtfimFree, AnsatzFamily::LtfimEquivariant};
    bool counts_ok = true;
    for (std::size_t f = 0; f < 6; f++) {
        const std::size_t n = family_model(families[f]) == "ltfim" ? 9 : 4;
        for (std::size_t p = 1; p <= 6; p++) {
            const AnsatzSpec spec{families[f], n, p};
            counts_ok = counts_ok && spec.param_count() == per_layer[f] * p &&
                        build_ansatz(spec).circuit.param_count() == per_layer[f] * p;
        }
    }
    return {qaoa_ok && heis_ok && counts_ok, std::string("parity twirl of QAOAPrime = QAOA: ") +
                                                 (qaoa_ok ? "yes" : "NO") + "; Haar twirl of HeisFree = " +
                                                 "HeisEquivariant up to positive scale: " + (heis_ok ? "yes" : "NO") +
                                                 "; counts 2p/3p/7p/2p/34p/9p for p=1..6: " +
                                                 (counts_ok ? "exact" : "WRONG")};
}

Outcome variational_bound(Context &ctx) {
    struct Job {
        std::string model;
        AnsatzFamily family;
        std::size_t n;
        std::vector<std::size_t> ps;
        std::size_t seeds;
    };
    const std::vector<Job> jobs = {
        {"tfim", AnsatzFamily::QaoaPrime, 4, {1, 2, 3}, 5},       {"tfim", AnsatzFamily::QaoaPrime, 6, {1, 2, 3}, 5},
        {"heisenberg", AnsatzFamily::HeisFree, 4, {1, 2, 3}, 5},  {"heisenberg", AnsatzFamily::HeisEquivariant, 4, {1, 2, 3}, 5},
        {"heisenberg", AnsatzFamily::HeisFree, 6, {1, 2}, 3},     {"heisenberg", AnsatzFamily::HeisEquivariant, 6, {1, 2, 3}, 3},
        {"ltfim", AnsatzFamily::LtfimFree, 9, {1, 2}, 3},         {"ltfim", AnsatzFamily::LtfimEquivariant, 9, {1, 2}, 3},
    };
    try {
        for (const auto &job : jobs) {
            const Hamiltonian h = build_hamiltonian(job.model, job.n);
            VqeOptions opts;
            opts.exact_energy = exact_ground_energy(h);
            for (std::size_t p : job.ps) {
                for (std::uint64_t seed = 0; seed < job.seeds; seed++) {
                    ctx.vqe_results.push_back(minimize_energy(h, {job.family, job.n, p}, seed, opts));
                }
            }
        }
    } catch (const std::logic_error &e) {
        return {false, std::string("post-condition tripped: ") + e.what()};
    }
    double margin = std::numeric_limits<double>::infinity();
    for (const auto &r : ctx.vqe_results) {
        margin = std::min(margin, r.energy - r.exact_energy);
    }
    return {margin >= -1e-8, std::to_string(ctx.vqe_results.size()) +
                                 " runs (TFIM, Heisenberg, LTFIM families), min(E - E_exact) " + fmt(margin)};
}

Outcome barren_trend(Context &) {
    const std::vector<std::size_t> ns = {4, 6, 8};
    const auto eq = barren_variance(AnsatzFamily::Qaoa, ns, 20, 300, 0);
    const auto ne = barren_variance(AnsatzFamily::QaoaPrime, ns, 20, 300, 0);
    const double s_eq = log_variance_slope(eq), s_ne = log_variance_slope(ne);
    std::string detail = "p=20, 300 samples; log-variance slope QAOA " + fmt(s_eq) + " vs QAOAPrime " + fmt(s_ne) +
                         "; variances";
    for (std::size_t i = 0; i < ns.size(); i++) {
        detail += " N=" + std::to_string(ns[i]) + ": " + fmt(eq[i].variance) + "/" + fmt(ne[i].variance);
    }
    return {s_eq > s_ne, detail};
}

// ---------------------------------------------------------------- datasets

Outcome dataset_integrity(Context &) {
    const auto games = enumerate_ttt();
    const auto oracle = testing::brute_force_games();
    bool same = games.size() == oracle.size();
    for (const auto &g : games) {
        const auto it = oracle.find(g.board);
        same = same && it != oracle.end() && it->second == static_cast<int>(g.label) - 1;
    }
    std::map<Board, TttClass> index;
    for (const auto &g : games) {
        index[g.board] = g.label;
    }
    bool closed = true;
    for (const auto &e : make_d4_rep().elements) {
        for (const auto &g : games) {
            const auto it = index.find(permute_board(g.board, e.clifford_form().perm));
            closed = closed && it != index.end() && it->second == g.label;
        }
    }
    std::size_t crossings = 0;
    for (const auto &s : enumerate_driving()) {
        crossings += s.difficulty == 1.0;
    }
    return {same && closed && crossings == 4,
            std::to_string(games.size()) + " games vs " + std::to_string(oracle.size()) + " from brute force (" +
                (same ? "identical sets and labels" : "MISMATCH") + "), D4 closure with labels " +
                (closed ? "holds" : "BROKEN") + ", difficulty-1 driving scenarios " + std::to_string(crossings)};
}

struct Criterion {
    const char *name;
    double limit_seconds;
    std::function<Outcome(Context &)> run;
};

}  // namespace

int main(int argc, char **argv) {
    Context ctx;
    std::string only;
    for (int i = 1; i < argc; i++) {
        const std::string a = argv[i];
        if (a == "--out" && i + 1 < argc) {
            ctx.out_dir = argv[++i];
        } else if (a == "--only" && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--out DIR] [--only SUBSTRING]\n";
            return 2;
        }
    }
    if (ctx.out_dir.empty()) {
        ctx.out_dir = fs::temp_directory_path() / "symmqvar_acceptance";
    }
    fs::create_directories(ctx.out_dir);
    ctx.threads = resolve_threads(std::nullopt);

    const std::vector<Criterion> criteria = {
        {"Twirl exactness", 1, twirl_exactness},
        {"Twirl properties", 10, twirl_properties},
        {"Haar twirl", 60, haar_twirl},
        {"Embedding equivariance", 30, embedding_equivariance},
        {"Model invariance", 300, model_invariance},
        {"Gradient correctness", 120, gradient_correctness},
        {"TFIM depth threshold", 600, tfim_threshold},
        {"Ansatz/twirl consistency", 1, ansatz_consistency},
        {"Variational bound", 600, variational_bound},
        {"Barren-plateau trend", 1800, barren_trend},
        {"Dataset integrity", 60, dataset_integrity},
        {"Generalization trend", 3 * 3600, generalization},
    };

    int failures = 0;
    for (const auto &c : criteria) {
        if (!only.empty() && std::string(c.name).find(only) == std::string::npos) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(ctx);
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.limit_seconds;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " [" << fmt(secs) << " s, limit "
                  << fmt(c.limit_seconds) << " s" << (in_time ? "" : ", TOO SLOW") << "]" << std::endl;
    }
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
