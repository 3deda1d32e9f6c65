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

#include <Eigen/Dense>

#include "symmqvar/pauli.hpp"

namespace symmqvar {

using DenseMatrix = Eigen::MatrixXcd;

/// Largest register for which dense 2^n x 2^n matrices are built.
inline constexpr std::size_t kMaxDenseQubits = 12;

/// Dense matrix of a single Pauli word including its phase. Qubit 0 is the
/// most significant tensor factor, matching the statevector ordering.
DenseMatrix pauli_matrix(const PauliString &p);

/// Sum of Kronecker products. Throws std::invalid_argument when n > kMaxDenseQubits
/// or when n disagrees with the sum's qubit count.
DenseMatrix dense_matrix(const PauliSum &op, std::size_t n);

/// Expands a Hermitian matrix in the Pauli basis, dropping terms below the
/// dedup tolerance. Throws if the matrix is not Hermitian within `tol`.
PauliSum pauli_decompose(const DenseMatrix &m, double tol = 1e-9);

/// exp(-i t H) for Hermitian H.
DenseMatrix expm_hermitian(const DenseMatrix &h, double t);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const DenseMatrix &h);

/// Row-major "(re,im)" rendering for debugging.
std::string format_matrix(const DenseMatrix &m, int precision = 6);

bool is_unitary(const DenseMatrix &u, double tol = 1e-10);

}  // namespace symmqvar
