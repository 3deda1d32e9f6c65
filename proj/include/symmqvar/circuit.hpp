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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "symmqvar/dense.hpp"
#include "symmqvar/pauli.hpp"

namespace symmqvar {

/// Pure state of n qubits. Qubit 0 is the most significant bit of the
/// basis-state index.
class StateVector {
   public:
    explicit StateVector(std::size_t n);  // |0...0>

    static StateVector basis(std::size_t n, std::size_t index);
    static StateVector plus(std::size_t n);
    /// Takes ownership of amplitudes; throws unless the norm is 1 within 1e-10.
    static StateVector from_amplitudes(std::size_t n, std::vector<complex_t> amps);

    std::size_t num_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<complex_t> amplitudes() { return amps_; }
    std::span<const complex_t> amplitudes() const { return amps_; }
    complex_t operator[](std::size_t i) const { return amps_[i]; }
    complex_t &operator[](std::size_t i) { return amps_[i]; }

    double norm_squared() const;
    complex_t inner(const StateVector &other) const;  // <this|other>
    Eigen::VectorXcd to_eigen() const;

   private:
    std::size_t n_;
    std::vector<complex_t> amps_;
};

/// Pauli word in bitmask form, ready to act on a statevector.
struct CompiledPauli {
    std::size_t xmask = 0;
    std::size_t zmask = 0;
    complex_t phase = 1;  // i^(number of Y letters)
    double coeff = 0;
};

/// PauliSum lowered to bitmasks for an n-qubit register.
struct CompiledOperator {
    std::size_t n = 0;
    std::vector<CompiledPauli> terms;

    static CompiledOperator compile(const PauliSum &op);
    /// out = op |in>
    void apply(const StateVector &in, StateVector &out) const;
    /// <psi| op |psi>, imaginary residue discarded.
    double expectation(const StateVector &psi) const;
};

/// One circuit element: a fixed unitary on listed qubits, or exp(-i*scale*theta*G)
/// with theta read from a parameter slot.
///
/// Parametrized generators whose terms pairwise commute are applied as a product
/// of Pauli exponentials. Otherwise the exponential is formed densely on the
/// generator's support, which must span at most kMaxDenseGateQubits qubits.
class Gate {
   public:
    enum class Kind { Fixed, Parametrized };
    static constexpr std::size_t kMaxDenseGateQubits = 4;

    static Gate fixed(std::vector<std::size_t> qubits, DenseMatrix unitary);
    static Gate parametrized(PauliSum generator, std::size_t slot, double scale = 1.0);

    Kind kind() const;
    bool is_parametrized() const { return kind() == Kind::Parametrized; }
    std::size_t num_qubits() const;  // register size for parametrized gates, 0 when unknown
    const std::vector<std::size_t> &qubits() const;
    std::size_t slot() const;
    double scale() const;
    const PauliSum &generator() const;
    const DenseMatrix &matrix() const;

    /// Rotation angle the gate uses for the given parameter vector.
    double angle(std::span<const double> params) const;
    /// Applies the gate; `angle` already includes the scale.
    void apply(StateVector &psi, double angle) const;
    void apply_inverse(StateVector &psi, double angle) const;
    /// out = G |in> (parametrized gates only).
    void apply_generator(const StateVector &in, StateVector &out) const;
    /// Dense unitary on the full n-qubit register (oracle path).
    DenseMatrix full_matrix(std::size_t n, double angle) const;

   private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit Gate(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
};

/// Ordered gate list plus a parameter table. Several gates may read the same slot.
class Circuit {
   public:
    explicit Circuit(std::size_t n, std::size_t param_count = 0) : n_(n), param_count_(param_count) {}

    std::size_t num_qubits() const { return n_; }
    std::size_t param_count() const { return param_count_; }
    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    /// Reserves a fresh parameter slot and returns its index.
    std::size_t new_parameter() { return param_count_++; }
    void set_param_count(std::size_t count);
    /// Validates qubit and slot indices before appending.
    void add(Gate gate);
    void append(const Circuit &other);

    /// Sum of scale*G over all gates bound to `slot`.
    PauliSum slot_generator(std::size_t slot) const;

   private:
    std::size_t n_;
    std::size_t param_count_;
    std::vector<Gate> gates_;
};

StateVector apply_gate(StateVector state, const Gate &gate, std::span<const double> params);

/// Runs the circuit from |0...0>, or from `initial` when given.
StateVector run_circuit(const Circuit &circuit, std::span<const double> params,
                        const StateVector *initial = nullptr);

double expectation(const StateVector &state, const PauliSum &obs);

/// Exact d<O>/dtheta_k by a reverse sweep. Gates sharing a slot accumulate.
std::vector<double> gradient_adjoint(const Circuit &circuit, std::span<const double> params, const PauliSum &obs,
                                     const StateVector *initial = nullptr);

/// Reverse sweep starting from an already-computed output state.
/// `gate_grads`, when non-null, receives d<O>/d(angle of gate g) * scale per gate.
std::vector<double> gradient_from_state(const Circuit &circuit, std::span<const double> params,
                                        StateVector final_state, const CompiledOperator &obs,
                                        std::vector<double> *gate_grads = nullptr);

/// Dense unitary of the whole circuit (n <= kMaxDenseQubits).
DenseMatrix circuit_matrix(const Circuit &circuit, std::span<const double> params);

}  // namespace symmqvar
