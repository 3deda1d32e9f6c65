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
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "symmqvar/circuit.hpp"
#include "symmqvar/symmetry.hpp"

namespace symmqvar {

/// Data-encoding circuit description.
///
/// FeatureWise puts exp(-i * scale * x_i * A / 2) on qubit i for each feature.
/// SO3 encodes x in R^3 as exp(-(i/2) <x, sigma>) on qubit 0, and O3 as
/// exp(-(i/2) <x, sigma> (x) X) on qubits 0 and 1 so that x -> -x is realized
/// by conjugation with I (x) Z.
struct EmbeddingSpec {
    enum class Kind { FeatureWise, SO3, O3 };

    Kind kind = Kind::FeatureWise;
    char axis = 'Z';
    double scale = 1.0;
    std::size_t num_qubits = 1;
    std::size_t feature_dim = 1;

    static EmbeddingSpec feature_wise(char axis, double scale, std::size_t n, std::size_t d);
    static EmbeddingSpec so3(std::size_t n = 1);
    static EmbeddingSpec o3(std::size_t n = 2);

    /// Throws std::invalid_argument if the invariants for `kind` are violated.
    void validate() const;
};

/// Fixed-gate circuit segment U(x) on the spec's register.
Circuit encode(const EmbeddingSpec &spec, std::span<const double> x);

using DataAction = std::function<std::vector<double>(std::span<const double>)>;

struct EquivarianceReport {
    bool pass = false;
    double max_deviation = 0;
};

/// Samples x ~ Uniform[-pi, pi]^d and compares the dense matrices of
/// U(V_s[x]) and U_s U(x) U_s^dagger entrywise.
EquivarianceReport verify_equivariance(const EmbeddingSpec &spec, const DataAction &data_action,
                                       const GroupElement &induced, std::size_t samples = 50, double tol = 1e-9,
                                       std::uint64_t seed = 0);

/// Euler rotation r_z(psi) r_x(theta) r_z(phi) built from frame (passive) axis
/// rotations, so its induced unitary is euler_unitary(-psi, -theta, -phi).
Eigen::Matrix3d so3_rotation(double psi, double theta, double phi);
/// R_Z(psi) R_X(theta) R_Z(phi) on qubit 0 of an n-qubit register.
GroupElement euler_unitary(double psi, double theta, double phi, std::size_t n = 1);

/// x -> V x for a 3x3 matrix.
DataAction linear_action(const Eigen::Matrix3d &v);
/// x -> x permuted by a pure qubit permutation element.
DataAction permutation_action(const GroupElement &g);

}  // namespace symmqvar
