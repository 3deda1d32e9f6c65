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

#include "symmqvar/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace symmqvar {

namespace {

inline double parity_sign(std::size_t v) {
    return (__builtin_popcountll(v) & 1) ? -1.0 : 1.0;
}

std::size_t highest_bit(std::size_t v) {
    return std::size_t{1} << (63 - __builtin_clzll(v));
}

/// Applies a dense 2^k x 2^k matrix to the listed qubits; qubits[0] is the
/// most significant local index bit.
void apply_local(StateVector &psi, const std::vector<std::size_t> &qubits, const DenseMatrix &u) {
    const std::size_t n = psi.num_qubits();
    const std::size_t k = qubits.size();
    const std::size_t local = std::size_t{1} << k;
    std::vector<std::size_t> offsets(local, 0);
    std::size_t mask = 0;
    for (std::size_t l = 0; l < local; l++) {
        for (std::size_t j = 0; j < k; j++) {
            if ((l >> (k - 1 - j)) & 1) {
                offsets[l] |= std::size_t{1} << (n - 1 - qubits[j]);
            }
        }
    }
    for (std::size_t q : qubits) {
        mask |= std::size_t{1} << (n - 1 - q);
    }
    auto amps = psi.amplitudes();
    if (k == 1) {
        const complex_t u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        const std::size_t bit = offsets[1];
        for (std::size_t b = 0; b < amps.size(); b++) {
            if (b & bit) {
                continue;
            }
            complex_t a0 = amps[b], a1 = amps[b | bit];
            amps[b] = u00 * a0 + u01 * a1;
            amps[b | bit] = u10 * a0 + u11 * a1;
        }
        return;
    }
    std::vector<complex_t> in(local), out(local);
    for (std::size_t b = 0; b < amps.size(); b++) {
        if (b & mask) {
            continue;
        }
        for (std::size_t l = 0; l < local; l++) {
            in[l] = amps[b | offsets[l]];
        }
        for (std::size_t r = 0; r < local; r++) {
            complex_t acc = 0;
            for (std::size_t c = 0; c < local; c++) {
                acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
            }
            out[r] = acc;
        }
        for (std::size_t l = 0; l < local; l++) {
            amps[b | offsets[l]] = out[l];
        }
    }
}

/// psi <- exp(-i * theta * P) psi for a single compiled Pauli word (coefficient ignored).
void apply_pauli_exp(StateVector &psi, const CompiledPauli &p, double theta) {
    auto amps = psi.amplitudes();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    if (p.xmask == 0) {
        const complex_t plus(c, -s), minus(c, s);
        for (std::size_t b = 0; b < amps.size(); b++) {
            amps[b] *= (parity_sign(b & p.zmask) > 0) ? plus : minus;
        }
        return;
    }
    const std::size_t pivot = highest_bit(p.xmask);
    const complex_t mis(0, -s);
    for (std::size_t b = 0; b < amps.size(); b++) {
        if (b & pivot) {
            continue;
        }
        const std::size_t b2 = b ^ p.xmask;
        const complex_t s1 = p.phase * parity_sign(b & p.zmask);
        const complex_t s2 = p.phase * parity_sign(b2 & p.zmask);
        const complex_t a1 = amps[b], a2 = amps[b2];
        amps[b] = c * a1 + mis * s2 * a2;
        amps[b2] = c * a2 + mis * s1 * a1;
    }
}

}  // namespace

StateVector::StateVector(std::size_t n) : n_(n), amps_(std::size_t{1} << n, complex_t(0)) {
    if (n > 30) {
        throw std::invalid_argument("StateVector: " + std::to_string(n) + " qubits is too many");
    }
    amps_[0] = 1;
}

StateVector StateVector::basis(std::size_t n, std::size_t index) {
    StateVector out(n);
    if (index >= out.dim()) {
        throw std::out_of_range("StateVector::basis: index out of range");
    }
    out.amps_[0] = 0;
    out.amps_[index] = 1;
    return out;
}

StateVector StateVector::plus(std::size_t n) {
    StateVector out(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(out.dim()));
    std::fill(out.amps_.begin(), out.amps_.end(), complex_t(a));
    return out;
}

StateVector StateVector::from_amplitudes(std::size_t n, std::vector<complex_t> amps) {
    if (amps.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("StateVector::from_amplitudes: expected 2^n amplitudes");
    }
    StateVector out(n);
    out.amps_ = std::move(amps);
    if (std::abs(out.norm_squared() - 1.0) > 1e-10) {
        throw std::invalid_argument("StateVector::from_amplitudes: state is not normalized");
    }
    return out;
}

double StateVector::norm_squared() const {
    double s = 0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

complex_t StateVector::inner(const StateVector &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("StateVector::inner: dimension mismatch");
    }
    complex_t s = 0;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        s += std::conj(amps_[i]) * other.amps_[i];
    }
    return s;
}

Eigen::VectorXcd StateVector::to_eigen() const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amps_.size()));
    for (std::size_t i = 0; i < amps_.size(); i++) {
        v(static_cast<Eigen::Index>(i)) = amps_[i];
    }
    return v;
}

CompiledOperator CompiledOperator::compile(const PauliSum &op) {
    static const complex_t ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    CompiledOperator out;
    out.n = op.num_qubits();
    for (const auto &[letters, coeff] : op.terms()) {
        CompiledPauli p;
        int ny = 0;
        for (std::size_t q = 0; q < out.n; q++) {
            const std::size_t bit = std::size_t{1} << (out.n - 1 - q);
            const char c = letters[q];
            if (c == 'X' || c == 'Y') {
                p.xmask |= bit;
            }
            if (c == 'Z' || c == 'Y') {
                p.zmask |= bit;
            }
            ny += c == 'Y';
        }
        p.phase = ipow[ny % 4];
        p.coeff = coeff;
        out.terms.push_back(p);
    }
    return out;
}

void CompiledOperator::apply(const StateVector &in, StateVector &out) const {
    if (in.num_qubits() != n || out.num_qubits() != n) {
        throw std::invalid_argument("CompiledOperator::apply: dimension mismatch");
    }
    auto src = in.amplitudes();
    auto dst = out.amplitudes();
    std::fill(dst.begin(), dst.end(), complex_t(0));
    for (const auto &t : terms) {
        const complex_t base = t.phase * t.coeff;
        for (std::size_t b = 0; b < src.size(); b++) {
            dst[b ^ t.xmask] += base * parity_sign(b & t.zmask) * src[b];
        }
    }
}

double CompiledOperator::expectation(const StateVector &psi) const {
    if (psi.num_qubits() != n) {
        throw std::invalid_argument("expectation: observable acts on " + std::to_string(n) + " qubits, state has " +
                                    std::to_string(psi.num_qubits()));
    }
    auto a = psi.amplitudes();
    complex_t total = 0;
    for (const auto &t : terms) {
        complex_t acc = 0;
        if (t.xmask == 0) {
            double r = 0;
            for (std::size_t b = 0; b < a.size(); b++) {
                r += parity_sign(b & t.zmask) * std::norm(a[b]);
            }
            acc = r;
        } else {
            for (std::size_t b = 0; b < a.size(); b++) {
                acc += std::conj(a[b ^ t.xmask]) * parity_sign(b & t.zmask) * a[b];
            }
            acc *= t.phase;
        }
        total += t.coeff * acc;
    }
    if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total.real()))) {
        throw std::logic_error("expectation: imaginary residue " + std::to_string(total.imag()));
    }
    return total.real();
}

struct Gate::Impl {
    Kind kind = Kind::Fixed;
    std::vector<std::size_t> qubits;
    DenseMatrix matrix;
    DenseMatrix matrix_adjoint;
    PauliSum generator;
    std::size_t slot = 0;
    double scale = 1.0;
    CompiledOperator compiled;
    bool commuting = true;
    Eigen::VectorXd eigenvalues;
    DenseMatrix eigenvectors;

    DenseMatrix local_unitary(double angle) const {
        Eigen::VectorXcd phases = (eigenvalues.cast<complex_t>() * complex_t(0, -angle)).array().exp();
        return eigenvectors * phases.asDiagonal() * eigenvectors.adjoint();
    }
};

Gate Gate::fixed(std::vector<std::size_t> qubits, DenseMatrix unitary) {
    const std::size_t local = std::size_t{1} << qubits.size();
    if (static_cast<std::size_t>(unitary.rows()) != local || static_cast<std::size_t>(unitary.cols()) != local) {
        throw std::invalid_argument("Gate::fixed: matrix size does not match " + std::to_string(qubits.size()) +
                                    " qubits");
    }
    if (!is_unitary(unitary)) {
        throw std::invalid_argument("Gate::fixed: matrix is not unitary within 1e-10");
    }
    std::vector<std::size_t> sorted = qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("Gate::fixed: repeated qubit");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Fixed;
    impl->qubits = std::move(qubits);
    impl->matrix_adjoint = unitary.adjoint();
    impl->matrix = std::move(unitary);
    return Gate(std::move(impl));
}

Gate Gate::parametrized(PauliSum generator, std::size_t slot, double scale) {
    if (!std::isfinite(scale)) {
        throw std::invalid_argument("Gate::parametrized: non-finite scale");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Parametrized;
    impl->qubits = generator.support();
    impl->slot = slot;
    impl->scale = scale;
    impl->compiled = CompiledOperator::compile(generator);
    impl->commuting = generator.terms_commute();
    if (!impl->commuting) {
        const std::size_t k = impl->qubits.size();
        if (k > kMaxDenseGateQubits) {
            throw std::invalid_argument("Gate::parametrized: non-commuting generator on " + std::to_string(k) +
                                        " qubits exceeds the dense limit");
        }
        PauliSum local(k);
        for (const auto &[letters, coeff] : generator.terms()) {
            std::string s;
            for (std::size_t q : impl->qubits) {
                s += letters[q];
            }
            local.add(s, coeff);
        }
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(dense_matrix(local, k));
        impl->eigenvalues = es.eigenvalues();
        impl->eigenvectors = es.eigenvectors();
    }
    impl->generator = std::move(generator);
    return Gate(std::move(impl));
}

Gate::Kind Gate::kind() const { return impl_->kind; }
std::size_t Gate::num_qubits() const {
    return impl_->kind == Kind::Parametrized ? impl_->generator.num_qubits() : 0;
}
const std::vector<std::size_t> &Gate::qubits() const { return impl_->qubits; }
std::size_t Gate::slot() const { return impl_->slot; }
double Gate::scale() const { return impl_->scale; }
const PauliSum &Gate::generator() const { return impl_->generator; }
const DenseMatrix &Gate::matrix() const { return impl_->matrix; }

double Gate::angle(std::span<const double> params) const {
    if (impl_->kind == Kind::Fixed) {
        return 0.0;
    }
    if (impl_->slot >= params.size()) {
        throw std::out_of_range("Gate parameter slot " + std::to_string(impl_->slot) + " out of range");
    }
    return impl_->scale * params[impl_->slot];
}

void Gate::apply(StateVector &psi, double angle) const {
    const Impl &g = *impl_;
    if (g.kind == Kind::Fixed) {
        for (std::size_t q : g.qubits) {
            if (q >= psi.num_qubits()) {
                throw std::out_of_range("Gate qubit " + std::to_string(q) + " out of range");
            }
        }
        apply_local(psi, g.qubits, g.matrix);
        return;
    }
    if (g.generator.num_qubits() != psi.num_qubits()) {
        throw std::invalid_argument("Gate generator acts on " + std::to_string(g.generator.num_qubits()) +
                                    " qubits, state has " + std::to_string(psi.num_qubits()));
    }
    if (g.commuting) {
        for (const auto &t : g.compiled.terms) {
            apply_pauli_exp(psi, t, angle * t.coeff);
        }
    } else {
        apply_local(psi, g.qubits, g.local_unitary(angle));
    }
}

void Gate::apply_inverse(StateVector &psi, double angle) const {
    const Impl &g = *impl_;
    if (g.kind == Kind::Fixed) {
        apply_local(psi, g.qubits, g.matrix_adjoint);
        return;
    }
    if (g.commuting) {
        for (auto it = g.compiled.terms.rbegin(); it != g.compiled.terms.rend(); ++it) {
            apply_pauli_exp(psi, *it, -angle * it->coeff);
        }
    } else {
        apply_local(psi, g.qubits, g.local_unitary(-angle));
    }
}

void Gate::apply_generator(const StateVector &in, StateVector &out) const {
    if (impl_->kind != Kind::Parametrized) {
        throw std::logic_error("Gate::apply_generator called on a fixed gate");
    }
    impl_->compiled.apply(in, out);
}

DenseMatrix Gate::full_matrix(std::size_t n, double angle) const {
    if (n > kMaxDenseQubits) {
        throw std::invalid_argument("Gate::full_matrix: register too large");
    }
    const std::size_t dim = std::size_t{1} << n;
    DenseMatrix out(dim, dim);
    for (std::size_t c = 0; c < dim; c++) {
        StateVector e = StateVector::basis(n, c);
        apply(e, angle);
        for (std::size_t r = 0; r < dim; r++) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = e[r];
        }
    }
    return out;
}

void Circuit::set_param_count(std::size_t count) {
    for (const auto &g : gates_) {
        if (g.is_parametrized() && g.slot() >= count) {
            throw std::invalid_argument("Circuit::set_param_count: existing gate uses slot " +
                                        std::to_string(g.slot()));
        }
    }
    param_count_ = count;
}

void Circuit::add(Gate gate) {
    for (std::size_t q : gate.qubits()) {
        if (q >= n_) {
            throw std::out_of_range("Circuit::add: qubit " + std::to_string(q) + " out of range for " +
                                    std::to_string(n_) + " qubits");
        }
    }
    if (gate.is_parametrized()) {
        if (gate.num_qubits() != n_) {
            throw std::invalid_argument("Circuit::add: generator register size mismatch");
        }
        if (gate.slot() >= param_count_) {
            throw std::out_of_range("Circuit::add: parameter slot " + std::to_string(gate.slot()) + " >= " +
                                    std::to_string(param_count_));
        }
    }
    gates_.push_back(std::move(gate));
}

void Circuit::append(const Circuit &other) {
    if (other.n_ != n_) {
        throw std::invalid_argument("Circuit::append: qubit count mismatch");
    }
    param_count_ = std::max(param_count_, other.param_count_);
    for (const auto &g : other.gates_) {
        add(g);
    }
}

PauliSum Circuit::slot_generator(std::size_t slot) const {
    PauliSum out(n_);
    for (const auto &g : gates_) {
        if (g.is_parametrized() && g.slot() == slot) {
            out.add(g.generator(), g.scale());
        }
    }
    return out;
}

StateVector apply_gate(StateVector state, const Gate &gate, std::span<const double> params) {
    gate.apply(state, gate.angle(params));
    return state;
}

StateVector run_circuit(const Circuit &circuit, std::span<const double> params, const StateVector *initial) {
    if (params.size() != circuit.param_count()) {
        throw std::invalid_argument("run_circuit: expected " + std::to_string(circuit.param_count()) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    StateVector psi = initial ? *initial : StateVector(circuit.num_qubits());
    if (psi.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("run_circuit: initial state has the wrong qubit count");
    }
    for (const auto &g : circuit.gates()) {
        g.apply(psi, g.angle(params));
    }
    return psi;
}

double expectation(const StateVector &state, const PauliSum &obs) {
    return CompiledOperator::compile(obs).expectation(state);
}

std::vector<double> gradient_from_state(const Circuit &circuit, std::span<const double> params,
                                        StateVector final_state, const CompiledOperator &obs,
                                        std::vector<double> *gate_grads) {
    std::vector<double> grad(circuit.param_count(), 0.0);
    const auto &gates = circuit.gates();
    if (gate_grads) {
        gate_grads->assign(gates.size(), 0.0);
    }
    StateVector &psi = final_state;
    StateVector lambda(psi.num_qubits());
    obs.apply(psi, lambda);
    StateVector mu(psi.num_qubits());
    for (std::size_t k = gates.size(); k-- > 0;) {
        const Gate &g = gates[k];
        const double angle = g.angle(params);
        if (g.is_parametrized()) {
            g.apply_generator(psi, mu);
            const double d = 2.0 * g.scale() * lambda.inner(mu).imag();
            grad[g.slot()] += d;
            if (gate_grads) {
                (*gate_grads)[k] = d;
            }
        }
        if (k > 0) {
            g.apply_inverse(psi, angle);
            g.apply_inverse(lambda, angle);
        }
    }
    return grad;
}

std::vector<double> gradient_adjoint(const Circuit &circuit, std::span<const double> params, const PauliSum &obs,
                                     const StateVector *initial) {
    if (obs.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("gradient_adjoint: observable qubit count mismatch");
    }
    StateVector psi = run_circuit(circuit, params, initial);
    return gradient_from_state(circuit, params, std::move(psi), CompiledOperator::compile(obs));
}

DenseMatrix circuit_matrix(const Circuit &circuit, std::span<const double> params) {
    const std::size_t n = circuit.num_qubits();
    const std::size_t dim = std::size_t{1} << n;
    if (n > kMaxDenseQubits) {
        throw std::invalid_argument("circuit_matrix: register too large");
    }
    DenseMatrix out(dim, dim);
    for (std::size_t c = 0; c < dim; c++) {
        StateVector e = StateVector::basis(n, c);
        for (const auto &g : circuit.gates()) {
            g.apply(e, g.angle(params));
        }
        for (std::size_t r = 0; r < dim; r++) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = e[r];
        }
    }
    return out;
}

}  // namespace symmqvar
