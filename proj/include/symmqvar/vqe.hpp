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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symmqvar/circuit.hpp"
#include "symmqvar/optim.hpp"
#include "symmqvar/pauli.hpp"

namespace symmqvar {

struct Hamiltonian {
    std::string model;  // "tfim", "heisenberg" or "ltfim"
    std::size_t n = 0;
    double g = 0;  // transverse field (tfim only)
    PauliSum op;
};

/// Periodic TFIM -sum Z_i Z_{i+1} - g sum X_i, periodic Heisenberg (even N) or
/// the nine-site board LTFIM. The periodic sums are kept literal, so on two
/// sites the single bond appears twice.
Hamiltonian build_hamiltonian(const std::string &model, std::size_t n, double g = 1.0);

using Edge = std::pair<std::size_t, std::size_t>;

/// Periodic bonds (i, i+1) starting at an even site (`even`) or an odd site.
std::vector<Edge> heisenberg_bonds(std::size_t n, bool even);
/// Isotropic XX+YY+ZZ over the given bonds.
PauliSum heisenberg_bond_sum(std::size_t n, const std::vector<Edge> &bonds);
/// Total spin S^2 = (1/4) sum_{ij} sigma_i . sigma_j.
PauliSum total_spin_squared(std::size_t n);

struct BoardEdges {
    std::vector<Edge> contour;
    std::vector<Edge> inside;
    std::vector<Edge> diagonal;
};
const BoardEdges &board_edges();

enum class AnsatzFamily { Qaoa, QaoaPrime, HeisFree, HeisEquivariant, LtfimFree, LtfimEquivariant };

const char *family_name(AnsatzFamily f);
/// Accepts the names printed by family_name; throws std::invalid_argument otherwise.
AnsatzFamily parse_family(const std::string &name);
/// "tfim", "heisenberg" or "ltfim".
std::string family_model(AnsatzFamily f);

struct AnsatzSpec {
    AnsatzFamily family = AnsatzFamily::Qaoa;
    std::size_t n = 2;
    std::size_t p = 1;

    /// Throws std::invalid_argument for sizes the family cannot take.
    void validate() const;
    std::size_t params_per_layer() const;
    std::size_t param_count() const { return params_per_layer() * p; }
};

struct Ansatz {
    Circuit circuit{0};
    StateVector initial{0};
    /// Gate used for the barren-plateau derivative: the first gate of layer 1
    /// that acts on qubit 0 with an X mixer (QAOA families) or the first gate
    /// of layer 1 touching qubit 0 otherwise.
    std::size_t probe_gate = 0;
};

Ansatz build_ansatz(const AnsatzSpec &spec);

/// Distinct generators of one layer, one per parameter slot.
std::vector<PauliSum> family_gateset(const AnsatzSpec &spec);

/// Minimum eigenvalue of the dense matrix. Throws for more than 12 qubits.
double exact_ground_energy(const PauliSum &op);
double exact_ground_energy(const Hamiltonian &h);

struct VqeOptions {
    LbfgsConfig lbfgs{};
    /// Reused instead of diagonalizing again when set.
    std::optional<double> exact_energy;
    /// Tolerance for the variational-bound post-condition.
    double bound_tolerance = 1e-8;
};

struct VqeResult {
    double energy = 0;
    double initial_energy = 0;
    double exact_energy = 0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    std::vector<double> params;
    std::vector<double> energies;  // per accepted iteration, starting with the initial energy
};

/// L-BFGS on <psi(theta)|H|psi(theta)> from Uniform[0, 2pi) parameters.
/// Throws DivergenceError on a non-finite energy and std::logic_error if the
/// result lies below the exact ground energy by more than the tolerance.
VqeResult minimize_energy(const Hamiltonian &h, const AnsatzSpec &spec, std::uint64_t seed,
                          const VqeOptions &options = {});

struct BarrenPoint {
    std::size_t n = 0;
    double mean = 0;
    double variance = 0;
    double stderr_variance = 0;
    std::size_t samples = 0;
};

/// Variance of d<Z_0 Z_1>/d(angle of the probe gate) over Uniform[0, 2pi]
/// parameter draws, one row per N.
std::vector<BarrenPoint> barren_variance(AnsatzFamily family, const std::vector<std::size_t> &ns, std::size_t p,
                                         std::size_t samples, std::uint64_t seed);

/// Least-squares slope of log(variance) against N.
double log_variance_slope(const std::vector<BarrenPoint> &points);

}  // namespace symmqvar
