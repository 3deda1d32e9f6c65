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

#include "symmqvar/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "symmqvar/dense.hpp"
#include "symmqvar/train.hpp"

namespace symmqvar {

namespace {

constexpr std::size_t kBoardSites = 9;

std::string word(std::size_t n, std::initializer_list<std::pair<std::size_t, char>> letters) {
    std::string w(n, 'I');
    for (auto [q, c] : letters) {
        w[q] = c;
    }
    return w;
}

PauliSum zz(std::size_t n, Edge e, double coeff = 1.0) {
    PauliSum out(n);
    out.add(word(n, {{e.first, 'Z'}, {e.second, 'Z'}}), coeff);
    return out;
}

PauliSum pair_term(std::size_t n, Edge e, char letter) {
    PauliSum out(n);
    out.add(word(n, {{e.first, letter}, {e.second, letter}}), 1.0);
    return out;
}

PauliSum single(std::size_t n, std::size_t q, char letter) {
    PauliSum out(n);
    out.add(word(n, {{q, letter}}), 1.0);
    return out;
}

std::vector<Edge> ring_bonds(std::size_t n) {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < n; i++) {
        out.emplace_back(i, (i + 1) % n);
    }
    return out;
}

std::size_t board_class(std::size_t q) {
    if (q == 8) {
        return 2;
    }
    return q % 2;  // 0 corner, 1 edge
}

StateVector singlet_state(std::size_t n) {
    std::vector<complex_t> amps(std::size_t{1} << n, 0.0);
    const std::size_t pairs = n / 2;
    const double amp = std::pow(std::sqrt(0.5), static_cast<double>(pairs));
    // Each pair contributes |01> (+) or |10> (-).
    for (std::size_t choice = 0; choice < (std::size_t{1} << pairs); choice++) {
        std::size_t index = 0;
        int sign = 1;
        for (std::size_t k = 0; k < pairs; k++) {
            const bool flipped = (choice >> k) & 1;
            const std::size_t hi = std::size_t{1} << (n - 1 - 2 * k);
            const std::size_t lo = std::size_t{1} << (n - 2 - 2 * k);
            index |= flipped ? hi : lo;
            if (flipped) {
                sign = -sign;
            }
        }
        amps[index] = amp * sign;
    }
    return StateVector::from_amplitudes(n, std::move(amps));
}

bool touches(const Gate &g, std::size_t q) {
    const auto &qs = g.qubits();
    return std::find(qs.begin(), qs.end(), q) != qs.end();
}

}  // namespace

std::vector<Edge> heisenberg_bonds(std::size_t n, bool even) {
    std::vector<Edge> out;
    for (std::size_t i = even ? 0 : 1; i < n; i += 2) {
        out.emplace_back(i, (i + 1) % n);
    }
    return out;
}

PauliSum heisenberg_bond_sum(std::size_t n, const std::vector<Edge> &bonds) {
    PauliSum out(n);
    for (const auto &e : bonds) {
        for (char c : {'X', 'Y', 'Z'}) {
            out.add(pair_term(n, e, c));
        }
    }
    return out;
}

PauliSum total_spin_squared(std::size_t n) {
    PauliSum out(n);
    out.add(std::string(n, 'I'), 0.75 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = i + 1; j < n; j++) {
            for (char c : {'X', 'Y', 'Z'}) {
                out.add(pair_term(n, {i, j}, c), 0.5);
            }
        }
    }
    return out;
}

const BoardEdges &board_edges() {
    static const BoardEdges edges = [] {
        BoardEdges e;
        for (std::size_t i = 0; i < 8; i++) {
            e.contour.emplace_back(i, (i + 1) % 8);
        }
        for (std::size_t q : {1, 3, 5, 7}) {
            e.inside.emplace_back(8, q);
        }
        for (std::size_t q : {0, 2, 4, 6}) {
            e.diagonal.emplace_back(8, q);
        }
        return e;
    }();
    return edges;
}

Hamiltonian build_hamiltonian(const std::string &model, std::size_t n, double g) {
    Hamiltonian h;
    h.model = model;
    h.n = n;
    if (model == "tfim") {
        if (n < 2) {
            throw std::invalid_argument("tfim needs N >= 2");
        }
        if (!std::isfinite(g)) {
            throw std::invalid_argument("tfim field must be finite");
        }
        h.g = g;
        h.op = PauliSum(n);
        for (const auto &e : ring_bonds(n)) {
            h.op.add(zz(n, e, -1.0));
        }
        for (std::size_t q = 0; q < n; q++) {
            h.op.add(single(n, q, 'X'), -g);
        }
    } else if (model == "heisenberg") {
        if (n < 2 || n % 2 != 0) {
            throw std::invalid_argument("heisenberg needs an even N >= 2");
        }
        h.op = heisenberg_bond_sum(n, ring_bonds(n));
    } else if (model == "ltfim") {
        if (n != kBoardSites) {
            throw std::invalid_argument("ltfim is defined on 9 sites");
        }
        const auto &edges = board_edges();
        h.op = PauliSum(n);
        for (const auto &e : edges.contour) {
            h.op.add(zz(n, e, 1.0));
        }
        for (const auto &e : edges.inside) {
            h.op.add(zz(n, e, 0.5));
        }
        for (const auto &e : edges.diagonal) {
            h.op.add(zz(n, e, 1.5));
        }
        for (std::size_t q = 0; q < n; q++) {
            h.op.add(single(n, q, 'X'));
            h.op.add(single(n, q, 'Z'));
        }
    } else {
        throw std::invalid_argument("unknown Hamiltonian model '" + model + "'");
    }
    return h;
}

const char *family_name(AnsatzFamily f) {
    switch (f) {
        case AnsatzFamily::Qaoa:
            return "qaoa";
        case AnsatzFamily::QaoaPrime:
            return "qaoa_prime";
        case AnsatzFamily::HeisFree:
            return "heis_free";
        case AnsatzFamily::HeisEquivariant:
            return "heis_equivariant";
        case AnsatzFamily::LtfimFree:
            return "ltfim_free";
        case AnsatzFamily::LtfimEquivariant:
            return "ltfim_equivariant";
    }
    return "?";
}

AnsatzFamily parse_family(const std::string &name) {
    for (auto f : {AnsatzFamily::Qaoa, AnsatzFamily::QaoaPrime, AnsatzFamily::HeisFree, AnsatzFamily::HeisEquivariant,
                   AnsatzFamily::LtfimFree, AnsatzFamily::LtfimEquivariant}) {
        if (name == family_name(f)) {
            return f;
        }
    }
    throw std::invalid_argument("unknown ansatz family '" + name + "'");
}

std::string family_model(AnsatzFamily f) {
    switch (f) {
        case AnsatzFamily::Qaoa:
        case AnsatzFamily::QaoaPrime:
            return "tfim";
        case AnsatzFamily::HeisFree:
        case AnsatzFamily::HeisEquivariant:
            return "heisenberg";
        default:
            return "ltfim";
    }
}

void AnsatzSpec::validate() const {
    if (p == 0) {
        throw std::invalid_argument("ansatz needs p >= 1");
    }
    switch (family) {
        case AnsatzFamily::Qaoa:
        case AnsatzFamily::QaoaPrime:
            if (n < 2 || n > 20) {
                throw std::invalid_argument("qaoa ansatz needs 2 <= N <= 20");
            }
            break;
        case AnsatzFamily::HeisFree:
        case AnsatzFamily::HeisEquivariant:
            if (n < 2 || n % 2 != 0 || n > 20) {
                throw std::invalid_argument("heisenberg ansatz needs an even N in [2, 20]");
            }
            break;
        default:
            if (n != kBoardSites) {
                throw std::invalid_argument("ltfim ansatz needs N = 9");
            }
    }
}

std::size_t AnsatzSpec::params_per_layer() const {
    switch (family) {
        case AnsatzFamily::Qaoa:
            return 2;
        case AnsatzFamily::QaoaPrime:
            return 3;
        case AnsatzFamily::HeisFree:
            return 7;
        case AnsatzFamily::HeisEquivariant:
            return 2;
        case AnsatzFamily::LtfimFree:
            return 34;
        case AnsatzFamily::LtfimEquivariant:
            return 9;
    }
    return 0;
}

Ansatz build_ansatz(const AnsatzSpec &spec) {
    spec.validate();
    const std::size_t n = spec.n;
    Ansatz a;
    a.circuit = Circuit(n);
    Circuit &c = a.circuit;
    std::optional<std::size_t> probe;
    auto add = [&](PauliSum gen, std::size_t slot) {
        c.add(Gate::parametrized(std::move(gen), slot));
        return c.size() - 1;
    };

    switch (spec.family) {
        case AnsatzFamily::Qaoa:
        case AnsatzFamily::QaoaPrime: {
            a.initial = StateVector::plus(n);
            const bool prime = spec.family == AnsatzFamily::QaoaPrime;
            for (std::size_t m = 0; m < spec.p; m++) {
                const std::size_t gamma = c.new_parameter();
                const std::size_t beta = c.new_parameter();
                const std::size_t alpha = prime ? c.new_parameter() : 0;
                for (const auto &e : ring_bonds(n)) {
                    add(zz(n, e), gamma);
                }
                for (std::size_t q = 0; q < n; q++) {
                    const std::size_t idx = add(single(n, q, 'X'), beta);
                    if (!probe && q == 0) {
                        probe = idx;
                    }
                }
                if (prime) {
                    for (std::size_t q = 0; q < n; q++) {
                        add(single(n, q, 'Y'), alpha);
                    }
                }
            }
            break;
        }
        case AnsatzFamily::HeisFree:
        case AnsatzFamily::HeisEquivariant: {
            a.initial = singlet_state(n);
            const auto odd = heisenberg_bonds(n, false);
            const auto even = heisenberg_bonds(n, true);
            for (std::size_t m = 0; m < spec.p; m++) {
                if (spec.family == AnsatzFamily::HeisEquivariant) {
                    const std::size_t gamma = c.new_parameter();
                    const std::size_t beta = c.new_parameter();
                    for (const auto &e : odd) {
                        add(heisenberg_bond_sum(n, {e}), gamma);
                    }
                    for (const auto &e : even) {
                        add(heisenberg_bond_sum(n, {e}), beta);
                    }
                    continue;
                }
                for (const auto *bonds : {&odd, &even}) {
                    for (char letter : {'X', 'Y', 'Z'}) {
                        const std::size_t slot = c.new_parameter();
                        for (const auto &e : *bonds) {
                            add(pair_term(n, e, letter), slot);
                        }
                    }
                }
                const std::size_t alpha = c.new_parameter();
                for (std::size_t q = 0; q < n; q++) {
                    add(single(n, q, 'Y'), alpha);
                }
            }
            break;
        }
        case AnsatzFamily::LtfimFree:
        case AnsatzFamily::LtfimEquivariant: {
            a.initial = StateVector::plus(n);
            const bool shared = spec.family == AnsatzFamily::LtfimEquivariant;
            const auto &edges = board_edges();
            for (std::size_t m = 0; m < spec.p; m++) {
                for (const auto *family : {&edges.contour, &edges.inside, &edges.diagonal}) {
                    const std::size_t slot = shared ? c.new_parameter() : 0;
                    for (const auto &e : *family) {
                        add(zz(n, e), shared ? slot : c.new_parameter());
                    }
                }
                for (char letter : {'X', 'Z'}) {
                    std::array<std::size_t, 3> class_slot{};
                    if (shared) {
                        for (auto &s : class_slot) {
                            s = c.new_parameter();
                        }
                    }
                    for (std::size_t q = 0; q < n; q++) {
                        add(single(n, q, letter), shared ? class_slot[board_class(q)] : c.new_parameter());
                    }
                }
            }
            break;
        }
    }
    if (!probe) {
        for (std::size_t i = 0; i < c.size(); i++) {
            if (touches(c.gates()[i], 0)) {
                probe = i;
                break;
            }
        }
    }
    a.probe_gate = probe.value_or(0);
    if (c.param_count() != spec.param_count()) {
        throw std::logic_error("build_ansatz: parameter count mismatch");
    }
    return a;
}

std::vector<PauliSum> family_gateset(const AnsatzSpec &spec) {
    AnsatzSpec one = spec;
    one.p = 1;
    const Ansatz a = build_ansatz(one);
    std::vector<PauliSum> out;
    for (std::size_t s = 0; s < a.circuit.param_count(); s++) {
        out.push_back(a.circuit.slot_generator(s));
    }
    return out;
}

double exact_ground_energy(const PauliSum &op) {
    const std::size_t n = op.num_qubits();
    if (n > 12) {
        throw std::invalid_argument("exact_ground_energy supports at most 12 qubits");
    }
    const DenseMatrix m = dense_matrix(op, n);
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.real(), Eigen::EigenvaluesOnly);
        return solver.eigenvalues()(0);
    }
    return min_eigenvalue(m);
}

double exact_ground_energy(const Hamiltonian &h) { return exact_ground_energy(h.op); }

VqeResult minimize_energy(const Hamiltonian &h, const AnsatzSpec &spec, std::uint64_t seed,
                          const VqeOptions &options) {
    if (h.n != spec.n) {
        throw std::invalid_argument("minimize_energy: Hamiltonian and ansatz sizes differ");
    }
    const Ansatz ansatz = build_ansatz(spec);
    const CompiledOperator compiled = CompiledOperator::compile(h.op);

    std::mt19937_64 rng(seed);
    std::vector<double> x0(ansatz.circuit.param_count());
    for (double &v : x0) {
        v = 2.0 * std::numbers::pi * uniform01(rng());
    }
    Objective energy = [&](std::span<const double> x, std::vector<double> &grad) {
        StateVector psi = run_circuit(ansatz.circuit, x, &ansatz.initial);
        const double e = compiled.expectation(psi);
        grad = gradient_from_state(ansatz.circuit, x, std::move(psi), compiled);
        return e;
    };
    const LbfgsResult res = lbfgs_minimize(energy, x0, options.lbfgs);

    VqeResult out;
    out.energy = res.value;
    out.initial_energy = res.values.front();
    out.iterations = res.iterations;
    out.evaluations = res.evaluations;
    out.seed = seed;
    out.converged = res.converged;
    out.params = res.x;
    out.energies = res.values;
    out.exact_energy = options.exact_energy ? *options.exact_energy : exact_ground_energy(h);
    if (out.energy < out.exact_energy - options.bound_tolerance) {
        throw std::logic_error("variational bound violated: energy " + std::to_string(out.energy) +
                               " below exact ground energy " + std::to_string(out.exact_energy));
    }
    return out;
}

std::vector<BarrenPoint> barren_variance(AnsatzFamily family, const std::vector<std::size_t> &ns, std::size_t p,
                                         std::size_t samples, std::uint64_t seed) {
    if (samples < 2) {
        throw std::invalid_argument("barren_variance needs at least two samples");
    }
    std::vector<BarrenPoint> out;
    for (std::size_t n : ns) {
        const Ansatz a = build_ansatz({family, n, p});
        PauliSum obs(n);
        obs.add(word(n, {{0, 'Z'}, {1, 'Z'}}), 1.0);
        const CompiledOperator compiled = CompiledOperator::compile(obs);
        std::mt19937_64 rng(seed * 1000003ULL + n);
        std::vector<double> params(a.circuit.param_count()), gate_grads;
        std::vector<double> d(samples);
        for (std::size_t s = 0; s < samples; s++) {
            for (double &v : params) {
                v = 2.0 * std::numbers::pi * uniform01(rng());
            }
            StateVector psi = run_circuit(a.circuit, params, &a.initial);
            gradient_from_state(a.circuit, params, std::move(psi), compiled, &gate_grads);
            d[s] = gate_grads[a.probe_gate];
        }
        BarrenPoint pt;
        pt.n = n;
        pt.samples = samples;
        for (double v : d) {
            pt.mean += v;
        }
        pt.mean /= static_cast<double>(samples);
        double m2 = 0, m4 = 0;
        for (double v : d) {
            const double r = (v - pt.mean) * (v - pt.mean);
            m2 += r;
            m4 += r * r;
        }
        const double ns_ = static_cast<double>(samples);
        pt.variance = m2 / (ns_ - 1);
        const double biased = m2 / ns_;
        pt.stderr_variance = std::sqrt(std::max(0.0, m4 / ns_ - biased * biased) / ns_);
        out.push_back(pt);
    }
    return out;
}

double log_variance_slope(const std::vector<BarrenPoint> &points) {
    if (points.size() < 2) {
        throw std::invalid_argument("log_variance_slope needs at least two points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &pt : points) {
        const double x = static_cast<double>(pt.n);
        const double y = std::log(pt.variance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(points.size());
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace symmqvar
