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

#include <gtest/gtest.h>

#include <random>

#include "random_circuits.hpp"
#include "symmqvar/circuit.hpp"
#include "symmqvar/dense.hpp"

namespace symmqvar {
namespace {

using testing::random_circuit;
using testing::random_params;
using testing::random_state;

Eigen::VectorXcd apply_dense(const DenseMatrix &m, const StateVector &psi) { return m * psi.to_eigen(); }

double max_diff(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(StateVector, Constructors) {
    StateVector z(3);
    EXPECT_EQ(z.dim(), 8u);
    EXPECT_EQ(z[0], complex_t(1, 0));
    const StateVector b = StateVector::basis(2, 2);
    EXPECT_EQ(b[2], complex_t(1, 0));
    const StateVector p = StateVector::plus(2);
    EXPECT_NEAR(p.norm_squared(), 1.0, 1e-15);
    EXPECT_NEAR(p[3].real(), 0.5, 1e-15);
    EXPECT_THROW(StateVector::from_amplitudes(1, {1.0, 1.0}), std::invalid_argument);
}

TEST(StateVector, QubitZeroIsMostSignificant) {
    // X on qubit 0 of |00> gives |10>, index 2.
    Circuit c(2, 1);
    c.add(Gate::parametrized(PauliSum(2, {{"XI", 1.0}}), 0));
    const std::vector<double> theta = {M_PI / 2};
    const StateVector psi = run_circuit(c, theta);
    EXPECT_NEAR(std::abs(psi[2]), 1.0, 1e-14);
}

TEST(Gate, CommutingGeneratorMatchesMatrixExponential) {
    std::mt19937_64 rng(1);
    PauliSum g(3, {{"ZZI", 0.7}, {"IZZ", -0.4}, {"XIX", 0.0}, {"ZIZ", 1.1}});
    const Gate gate = Gate::parametrized(g, 0, 0.8);
    const StateVector psi = random_state(rng, 3);
    StateVector out = psi;
    gate.apply(out, 0.8 * 1.3);
    const DenseMatrix u = expm_hermitian(dense_matrix(g, 3), 0.8 * 1.3);
    EXPECT_LT(max_diff(out.to_eigen(), apply_dense(u, psi)), 1e-13);
}

TEST(Gate, NonCommutingGeneratorMatchesMatrixExponential) {
    std::mt19937_64 rng(2);
    PauliSum g(4, {{"XIYI", 0.3}, {"ZIII", 0.9}, {"IIZZ", -0.2}});
    ASSERT_FALSE(g.terms_commute());
    const Gate gate = Gate::parametrized(g, 0);
    const StateVector psi = random_state(rng, 4);
    StateVector out = psi;
    gate.apply(out, 0.77);
    EXPECT_LT(max_diff(out.to_eigen(), apply_dense(expm_hermitian(dense_matrix(g, 4), 0.77), psi)), 1e-12);
    gate.apply_inverse(out, 0.77);
    EXPECT_LT(max_diff(out.to_eigen(), psi.to_eigen()), 1e-12);
}

TEST(Gate, WideNonCommutingGeneratorThrows) {
    PauliSum g(5, {{"XXXXX", 1.0}, {"ZIIII", 1.0}});
    EXPECT_THROW(Gate::parametrized(g, 0), std::invalid_argument);
}

TEST(Gate, FixedGateOnReorderedQubits) {
    std::mt19937_64 rng(3);
    // CNOT with control qubit 2 and target qubit 0.
    DenseMatrix cnot = DenseMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    const Gate gate = Gate::fixed({2, 0}, cnot);
    const StateVector psi = random_state(rng, 3);
    StateVector out = psi;
    gate.apply(out, 0);
    for (std::size_t i = 0; i < 8; i++) {
        const bool control = i & 1;  // qubit 2 is the least significant bit
        const std::size_t src = control ? (i ^ 4) : i;
        EXPECT_NEAR(std::abs(out[i] - psi[src]), 0.0, 1e-15);
    }
}

TEST(Gate, FixedGateValidation) {
    DenseMatrix m = DenseMatrix::Identity(2, 2) * 2.0;
    EXPECT_THROW(Gate::fixed({0}, m), std::invalid_argument);
    EXPECT_THROW(Gate::fixed({0, 0}, DenseMatrix::Identity(4, 4)), std::invalid_argument);
}

TEST(Circuit, AddValidatesIndices) {
    Circuit c(2, 1);
    EXPECT_THROW(c.add(Gate::fixed({2}, DenseMatrix::Identity(2, 2))), std::out_of_range);
    EXPECT_THROW(c.add(Gate::parametrized(PauliSum(2, {{"XI", 1.0}}), 1)), std::out_of_range);
    EXPECT_THROW(c.add(Gate::parametrized(PauliSum(3, {{"XII", 1.0}}), 0)), std::invalid_argument);
}

TEST(Circuit, RunMatchesDenseProduct) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; trial++) {
        const std::size_t n = 2 + trial % 3;
        const Circuit c = random_circuit(rng, n, 12);
        const auto params = random_params(rng, c.param_count());
        DenseMatrix u = DenseMatrix::Identity(1 << n, 1 << n);
        for (const auto &g : c.gates()) {
            u = g.full_matrix(n, g.is_parametrized() ? g.angle(params) : 0.0) * u;
        }
        EXPECT_LT((circuit_matrix(c, params) - u).cwiseAbs().maxCoeff(), 1e-12);
        const StateVector psi = run_circuit(c, params);
        EXPECT_LT(max_diff(psi.to_eigen(), u.col(0)), 1e-12);
    }
}

TEST(Circuit, ExpectationMatchesDense) {
    std::mt19937_64 rng(5);
    const StateVector psi = random_state(rng, 3);
    PauliSum op(3, {{"XYZ", 0.4}, {"ZZI", -1.0}, {"IIX", 0.25}, {"III", 2.0}});
    const Eigen::VectorXcd v = psi.to_eigen();
    const double dense = (v.adjoint() * dense_matrix(op, 3) * v)(0, 0).real();
    EXPECT_NEAR(expectation(psi, op), dense, 1e-13);
}

TEST(Circuit, SlotGeneratorSumsSharedGates) {
    Circuit c(2, 1);
    c.add(Gate::parametrized(PauliSum(2, {{"XI", 1.0}}), 0, 0.5));
    c.add(Gate::parametrized(PauliSum(2, {{"IX", 1.0}}), 0, 0.5));
    const PauliSum g = c.slot_generator(0);
    EXPECT_DOUBLE_EQ(g.coefficient("XI"), 0.5);
    EXPECT_DOUBLE_EQ(g.coefficient("IX"), 0.5);
}

TEST(Gradient, AdjointMatchesFiniteDifferences) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; trial++) {
        const std::size_t n = 1 + trial % 5;
        const Circuit c = random_circuit(rng, n, 4 + trial);
        const auto params = random_params(rng, c.param_count());
        PauliSum obs(n);
        obs.add(testing::random_word(rng, n, false), 1.0);
        obs.add(testing::random_word(rng, n, false), -0.5);
        const StateVector init = random_state(rng, n);
        const auto adj = gradient_adjoint(c, params, obs, &init);
        const auto fd = testing::finite_difference_gradient(c, params, obs, &init);
        EXPECT_LT(testing::relative_error(adj, fd), 1e-6) << "trial " << trial;
    }
}

TEST(Gradient, PerGateGradientsSumToSlotGradient) {
    std::mt19937_64 rng(7);
    const Circuit c = random_circuit(rng, 3, 16);
    const auto params = random_params(rng, c.param_count());
    const PauliSum obs(3, {{"ZZI", 1.0}});
    std::vector<double> per_gate;
    const auto slot_grad = gradient_from_state(c, params, run_circuit(c, params), CompiledOperator::compile(obs),
                                               &per_gate);
    ASSERT_EQ(per_gate.size(), c.size());
    std::vector<double> summed(c.param_count(), 0.0);
    for (std::size_t i = 0; i < c.size(); i++) {
        if (c.gates()[i].is_parametrized()) {
            summed[c.gates()[i].slot()] += per_gate[i];
        }
    }
    for (std::size_t k = 0; k < summed.size(); k++) {
        EXPECT_NEAR(summed[k], slot_grad[k], 1e-12);
    }
}

TEST(Gradient, ParameterLengthChecked) {
    Circuit c(1, 2);
    c.add(Gate::parametrized(PauliSum(1, {{"X", 1.0}}), 1));
    const std::vector<double> short_params = {0.1};
    EXPECT_THROW(run_circuit(c, short_params), std::invalid_argument);
}

}  // namespace
}  // namespace symmqvar
