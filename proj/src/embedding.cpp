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

#include "symmqvar/embedding.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace symmqvar {

namespace {

const complex_t kI(0, 1);

DenseMatrix pauli2(char axis) {
    return pauli_matrix(PauliString(std::string(1, axis)));
}

/// cos(r/2) I - i sin(r/2)/r * M for M with M^2 = r^2 I.
DenseMatrix half_angle_exp(const DenseMatrix &m, double r) {
    DenseMatrix id = DenseMatrix::Identity(m.rows(), m.cols());
    if (r == 0.0) {
        return id;
    }
    return std::cos(r / 2) * id - kI * (std::sin(r / 2) / r) * m;
}

}  // namespace

EmbeddingSpec EmbeddingSpec::feature_wise(char axis, double scale, std::size_t n, std::size_t d) {
    EmbeddingSpec s;
    s.kind = Kind::FeatureWise;
    s.axis = axis;
    s.scale = scale;
    s.num_qubits = n;
    s.feature_dim = d;
    s.validate();
    return s;
}

EmbeddingSpec EmbeddingSpec::so3(std::size_t n) {
    EmbeddingSpec s;
    s.kind = Kind::SO3;
    s.num_qubits = n;
    s.feature_dim = 3;
    s.validate();
    return s;
}

EmbeddingSpec EmbeddingSpec::o3(std::size_t n) {
    EmbeddingSpec s;
    s.kind = Kind::O3;
    s.num_qubits = n;
    s.feature_dim = 3;
    s.validate();
    return s;
}

void EmbeddingSpec::validate() const {
    switch (kind) {
        case Kind::FeatureWise:
            if (axis != 'X' && axis != 'Y' && axis != 'Z') {
                throw std::invalid_argument("FeatureWise embedding axis must be X, Y or Z");
            }
            if (feature_dim > num_qubits || feature_dim == 0) {
                throw std::invalid_argument("FeatureWise embedding needs 0 < d <= n");
            }
            if (!std::isfinite(scale)) {
                throw std::invalid_argument("FeatureWise embedding scale must be finite");
            }
            break;
        case Kind::SO3:
            if (feature_dim != 3 || num_qubits < 1) {
                throw std::invalid_argument("SO3 embedding needs d = 3 and n >= 1");
            }
            break;
        case Kind::O3:
            if (feature_dim != 3 || num_qubits < 2) {
                throw std::invalid_argument("O3 embedding needs d = 3 and n >= 2");
            }
            break;
    }
}

Circuit encode(const EmbeddingSpec &spec, std::span<const double> x) {
    spec.validate();
    if (x.size() != spec.feature_dim) {
        throw std::invalid_argument("encode: expected " + std::to_string(spec.feature_dim) + " features, got " +
                                    std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("encode: non-finite feature");
        }
    }
    Circuit out(spec.num_qubits);
    switch (spec.kind) {
        case EmbeddingSpec::Kind::FeatureWise: {
            const DenseMatrix a = pauli2(spec.axis);
            for (std::size_t i = 0; i < x.size(); i++) {
                const double angle = spec.scale * x[i];
                out.add(Gate::fixed({i}, half_angle_exp(a * angle, std::abs(angle))));
            }
            break;
        }
        case EmbeddingSpec::Kind::SO3: {
            DenseMatrix m = x[0] * pauli2('X') + x[1] * pauli2('Y') + x[2] * pauli2('Z');
            const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            out.add(Gate::fixed({0}, half_angle_exp(m, r)));
            break;
        }
        case EmbeddingSpec::Kind::O3: {
            PauliSum g(2, {{"XX", x[0]}, {"YX", x[1]}, {"ZX", x[2]}});
            const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            out.add(Gate::fixed({0, 1}, half_angle_exp(dense_matrix(g, 2), r)));
            break;
        }
    }
    return out;
}

EquivarianceReport verify_equivariance(const EmbeddingSpec &spec, const DataAction &data_action,
                                       const GroupElement &induced, std::size_t samples, double tol,
                                       std::uint64_t seed) {
    if (induced.num_qubits() != spec.num_qubits) {
        throw std::invalid_argument("verify_equivariance: induced element acts on the wrong register");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
    EquivarianceReport report;
    std::vector<double> x(spec.feature_dim);
    for (std::size_t s = 0; s < samples; s++) {
        for (double &v : x) {
            v = dist(rng);
        }
        const std::vector<double> vx = data_action(x);
        const DenseMatrix lhs = circuit_matrix(encode(spec, vx), {});
        const DenseMatrix rhs = induced.conjugate_matrix(circuit_matrix(encode(spec, x), {}));
        report.max_deviation = std::max(report.max_deviation, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    report.pass = report.max_deviation < tol;
    return report;
}

namespace {

Eigen::Matrix3d frame_rz(double a) {
    Eigen::Matrix3d m;
    m << std::cos(a), std::sin(a), 0, -std::sin(a), std::cos(a), 0, 0, 0, 1;
    return m;
}

Eigen::Matrix3d frame_rx(double a) {
    Eigen::Matrix3d m;
    m << 1, 0, 0, 0, std::cos(a), std::sin(a), 0, -std::sin(a), std::cos(a);
    return m;
}

}  // namespace

Eigen::Matrix3d so3_rotation(double psi, double theta, double phi) {
    return frame_rz(psi) * frame_rx(theta) * frame_rz(phi);
}

GroupElement euler_unitary(double psi, double theta, double phi, std::size_t n) {
    auto rot = [](char axis, double a) { return half_angle_exp(pauli2(axis) * a, std::abs(a)); };
    DenseMatrix v = rot('Z', psi) * rot('X', theta) * rot('Z', phi);
    DenseMatrix full = v;
    for (std::size_t q = 1; q < n; q++) {
        DenseMatrix next = DenseMatrix::Zero(full.rows() * 2, full.cols() * 2);
        for (Eigen::Index r = 0; r < full.rows(); r++) {
            for (Eigen::Index c = 0; c < full.cols(); c++) {
                next(2 * r, 2 * c) = full(r, c);
                next(2 * r + 1, 2 * c + 1) = full(r, c);
            }
        }
        full = std::move(next);
    }
    return GroupElement::dense(std::move(full));
}

DataAction linear_action(const Eigen::Matrix3d &v) {
    return [v](std::span<const double> x) {
        Eigen::Vector3d in(x[0], x[1], x[2]);
        Eigen::Vector3d out = v * in;
        return std::vector<double>{out(0), out(1), out(2)};
    };
}

DataAction permutation_action(const GroupElement &g) {
    return [g](std::span<const double> x) { return g.permute_features(x); };
}

}  // namespace symmqvar
