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

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symmqvar/dense.hpp"
#include "symmqvar/pauli.hpp"

namespace symmqvar {

/// U = F * P where P moves qubit q to perm[q] and F is a Pauli frame.
struct CliffordForm {
    std::vector<std::size_t> perm;
    PauliString frame;
};

/// A unitary U_s, either in permutation-plus-Pauli-frame form (conjugation is
/// symbolic) or as a dense matrix.
class GroupElement {
   public:
    static GroupElement identity(std::size_t n);
    static GroupElement permutation(std::vector<std::size_t> perm);
    static GroupElement pauli(PauliString frame);
    static GroupElement clifford(std::vector<std::size_t> perm, PauliString frame);
    static GroupElement dense(DenseMatrix unitary);

    std::size_t num_qubits() const { return n_; }
    bool is_clifford() const { return std::holds_alternative<CliffordForm>(form_); }
    const CliffordForm &clifford_form() const { return std::get<CliffordForm>(form_); }

    /// this * other as unitaries.
    GroupElement compose(const GroupElement &other) const;
    /// U op U^dagger.
    PauliSum conjugate(const PauliSum &op) const;
    /// U m U^dagger for a dense 2^n x 2^n matrix; index arithmetic for Clifford form.
    DenseMatrix conjugate_matrix(const DenseMatrix &m) const;
    /// Dense 2^n x 2^n unitary.
    DenseMatrix to_dense() const;
    /// Equality up to a global phase.
    bool equivalent(const GroupElement &other, double tol = 1e-10) const;
    bool is_identity() const;

    /// Moves feature q to position perm[q]; only for frame-free permutations.
    std::vector<double> permute_features(std::span<const double> x) const;

   private:
    std::size_t n_ = 0;
    std::variant<CliffordForm, DenseMatrix> form_;
};

struct SymmetryRep {
    std::string name;
    std::size_t num_qubits = 0;
    std::vector<GroupElement> elements;

    std::size_t order() const { return elements.size(); }
    bool contains_identity() const;
    /// Every product of two listed elements is again listed (up to phase).
    bool is_closed() const;
    /// Images of `qubit` under the permutation parts of Clifford elements.
    std::vector<std::size_t> orbit(std::size_t qubit) const;
};

/// Joint single-qubit Haar conjugation V^{(x)n} on an n-qubit register.
struct HaarTwirlSpec {
    std::size_t num_qubits = 0;
};

/// (1/|S|) sum_s U_s op U_s^dagger. Symbolic for Clifford elements.
PauliSum twirl_finite(const SymmetryRep &rep, const PauliSum &op);
/// Same average computed with dense matrices for every element (n <= 12).
PauliSum twirl_finite_dense(const SymmetryRep &rep, const PauliSum &op);

/// Closed-form local-Haar twirl: weight-1 terms vanish, P_i P_j maps to
/// (X_iX_j + Y_iY_j + Z_iZ_j)/3 when the letters agree and to 0 otherwise.
/// Identity contributions are dropped. Throws for terms of weight > 2.
PauliSum twirl_haar_local(const HaarTwirlSpec &spec, const PauliSum &op);

struct GatesetReport {
    std::vector<PauliSum> generators;
    std::vector<std::size_t> trivialized;  // input indices whose twirl vanished
    /// (input index, output index) for inputs folded into an earlier generator.
    std::vector<std::pair<std::size_t, std::size_t>> merged;
    std::vector<std::string> notes;
};

GatesetReport symmetrize_gateset(const std::vector<PauliSum> &gateset, const SymmetryRep &rep);
GatesetReport symmetrize_gateset(const std::vector<PauliSum> &gateset, const HaarTwirlSpec &spec);

/// True iff the two sums are proportional with |cosine similarity| > 1 - 1e-10.
bool proportional(const PauliSum &a, const PauliSum &b, double *ratio = nullptr);

struct CommuteReport {
    bool commutes = true;
    double max_violation = 0;
    std::size_t worst_element = 0;
};

/// Max over elements of the commutator size: symbolic coefficient difference of
/// U op U^dagger - op for Clifford elements, max entry of [op, U] for dense ones.
CommuteReport check_commutes(const PauliSum &op, const SymmetryRep &rep, double tol);

SymmetryRep make_trivial_rep(std::size_t n);
/// {I, SWAP, X(x)X, SWAP (X(x)X)} on two qubits.
SymmetryRep make_klein_rep();
SymmetryRep make_exchange_rep();
SymmetryRep make_signflip_rep();
/// {I, X^{(x)n}}.
SymmetryRep make_parity_rep(std::size_t n);
/// Board symmetries on 9 qubits: ring 0..7 (corners even, edges odd), center 8.
SymmetryRep make_d4_rep();
SymmetryRep make_z4_rep();
/// Looks up a built-in representation by name (klein, exchange, signflip, parity,
/// d4, z4, trivial). `n` is used by parity and trivial.
SymmetryRep make_rep(const std::string &name, std::size_t n = 0);

/// Quarter-turn ring permutation i -> i+2 mod 8, center fixed.
std::vector<std::size_t> board_rotation();
/// Vertical-axis reflection SWAP_02 SWAP_73 SWAP_64.
std::vector<std::size_t> board_flip();

}  // namespace symmqvar
