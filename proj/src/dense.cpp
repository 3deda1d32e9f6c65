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

#include "symmqvar/dense.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace symmqvar {

namespace {

DenseMatrix single_pauli(char c) {
    DenseMatrix m(2, 2);
    const complex_t i(0, 1);
    switch (c) {
        case 'I':
            m << 1, 0, 0, 1;
            break;
        case 'X':
            m << 0, 1, 1, 0;
            break;
        case 'Y':
            m << 0, -i, i, 0;
            break;
        case 'Z':
            m << 1, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("Not a Pauli letter");
    }
    return m;
}

DenseMatrix kron(const DenseMatrix &a, const DenseMatrix &b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); r++) {
        for (Eigen::Index c = 0; c < a.cols(); c++) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

}  // namespace

DenseMatrix pauli_matrix(const PauliString &p) {
    if (p.size() > kMaxDenseQubits) {
        throw std::invalid_argument("pauli_matrix: " + std::to_string(p.size()) + " qubits exceeds dense limit");
    }
    DenseMatrix out = DenseMatrix::Identity(1, 1);
    for (char c : p.letters) {
        out = kron(out, single_pauli(c));
    }
    return out * p.phase_value();
}

DenseMatrix dense_matrix(const PauliSum &op, std::size_t n) {
    if (n > kMaxDenseQubits) {
        throw std::invalid_argument("dense_matrix: " + std::to_string(n) + " qubits exceeds the limit of " +
                                    std::to_string(kMaxDenseQubits));
    }
    if (op.num_qubits() != n) {
        throw std::invalid_argument("dense_matrix: operator acts on " + std::to_string(op.num_qubits()) +
                                    " qubits, requested " + std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    // Direct construction: each Pauli word is a signed, phased permutation.
    for (const auto &[letters, coeff] : op.terms()) {
        std::size_t xmask = 0, zmask = 0;
        int ny = 0;
        for (std::size_t q = 0; q < n; q++) {
            std::size_t bit = std::size_t{1} << (n - 1 - q);
            char c = letters[q];
            if (c == 'X' || c == 'Y') {
                xmask |= bit;
            }
            if (c == 'Z' || c == 'Y') {
                zmask |= bit;
            }
            ny += c == 'Y';
        }
        static const complex_t ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        complex_t base = ipow[ny % 4] * coeff;
        for (std::size_t b = 0; b < dim; b++) {
            double sign = (__builtin_popcountll(b & zmask) & 1) ? -1.0 : 1.0;
            out(static_cast<Eigen::Index>(b ^ xmask), static_cast<Eigen::Index>(b)) += base * sign;
        }
    }
    return out;
}

PauliSum pauli_decompose(const DenseMatrix &m, double tol) {
    const Eigen::Index dim = m.rows();
    std::size_t n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        n++;
    }
    if ((Eigen::Index{1} << n) != dim || m.cols() != dim) {
        throw std::invalid_argument("pauli_decompose: matrix is not 2^n x 2^n");
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw std::invalid_argument("pauli_decompose: matrix is not Hermitian");
    }
    PauliSum out(n);
    const std::size_t count = std::size_t{1} << (2 * n);
    const char letters[4] = {'I', 'X', 'Y', 'Z'};
    for (std::size_t code = 0; code < count; code++) {
        std::string s(n, 'I');
        std::size_t xmask = 0, zmask = 0;
        int ny = 0;
        for (std::size_t q = 0; q < n; q++) {
            int l = static_cast<int>((code >> (2 * (n - 1 - q))) & 3);
            s[q] = letters[l];
            std::size_t bit = std::size_t{1} << (n - 1 - q);
            if (l == 1 || l == 2) {
                xmask |= bit;
            }
            if (l == 2 || l == 3) {
                zmask |= bit;
            }
            ny += l == 2;
        }
        // Tr(P m) / 2^n with P[b ^ x, b] = i^ny (-1)^{|b & z|}.
        static const complex_t ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        complex_t acc = 0;
        for (Eigen::Index b = 0; b < dim; b++) {
            double sign = (__builtin_popcountll(static_cast<std::size_t>(b) & zmask) & 1) ? -1.0 : 1.0;
            acc += sign * m(b, static_cast<Eigen::Index>(static_cast<std::size_t>(b) ^ xmask));
        }
        acc *= ipow[ny % 4] / static_cast<double>(dim);
        if (std::abs(acc.real()) >= kDedupTolerance) {
            out.add(s, acc.real());
        }
    }
    return out;
}

DenseMatrix expm_hermitian(const DenseMatrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
    Eigen::VectorXcd phases = (es.eigenvalues().cast<complex_t>() * complex_t(0, -t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const DenseMatrix &h) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::string format_matrix(const DenseMatrix &m, int precision) {
    std::ostringstream out;
    out << std::setprecision(precision);
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            out << (c ? " " : "") << "(" << m(r, c).real() << "," << m(r, c).imag() << ")";
        }
        out << "\n";
    }
    return out.str();
}

bool is_unitary(const DenseMatrix &u, double tol) {
    if (u.rows() != u.cols()) {
        return false;
    }
    return (u * u.adjoint() - DenseMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() < tol;
}

}  // namespace symmqvar
