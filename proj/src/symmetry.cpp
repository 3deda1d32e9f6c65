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

#include "symmqvar/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace symmqvar {

namespace {

void check_perm(const std::vector<std::size_t> &perm) {
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); i++) {
        if (sorted[i] != i) {
            throw std::invalid_argument("GroupElement: not a permutation");
        }
    }
}

std::string permute_letters(const std::vector<std::size_t> &perm, const std::string &letters) {
    std::string out(letters.size(), 'I');
    for (std::size_t q = 0; q < letters.size(); q++) {
        out[perm[q]] = letters[q];
    }
    return out;
}

DenseMatrix permutation_matrix(const std::vector<std::size_t> &perm) {
    const std::size_t n = perm.size();
    const std::size_t dim = std::size_t{1} << n;
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    for (std::size_t c = 0; c < dim; c++) {
        std::size_t r = 0;
        for (std::size_t q = 0; q < n; q++) {
            if ((c >> (n - 1 - q)) & 1) {
                r |= std::size_t{1} << (n - 1 - perm[q]);
            }
        }
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 1;
    }
    return out;
}

}  // namespace

GroupElement GroupElement::identity(std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    return clifford(std::move(perm), PauliString::identity(n));
}

GroupElement GroupElement::permutation(std::vector<std::size_t> perm) {
    const std::size_t n = perm.size();
    return clifford(std::move(perm), PauliString::identity(n));
}

GroupElement GroupElement::pauli(PauliString frame) {
    std::vector<std::size_t> perm(frame.size());
    std::iota(perm.begin(), perm.end(), 0);
    return clifford(std::move(perm), std::move(frame));
}

GroupElement GroupElement::clifford(std::vector<std::size_t> perm, PauliString frame) {
    if (perm.size() != frame.size()) {
        throw std::invalid_argument("GroupElement: permutation and frame sizes differ");
    }
    check_perm(perm);
    GroupElement g;
    g.n_ = perm.size();
    g.form_ = CliffordForm{std::move(perm), std::move(frame)};
    return g;
}

GroupElement GroupElement::dense(DenseMatrix unitary) {
    if (!is_unitary(unitary)) {
        throw std::invalid_argument("GroupElement: dense matrix is not unitary within 1e-10");
    }
    std::size_t n = 0;
    while ((Eigen::Index{1} << n) < unitary.rows()) {
        n++;
    }
    if ((Eigen::Index{1} << n) != unitary.rows()) {
        throw std::invalid_argument("GroupElement: dense matrix is not 2^n x 2^n");
    }
    if (n > kMaxDenseQubits) {
        throw std::invalid_argument("GroupElement: dense form limited to 12 qubits");
    }
    GroupElement g;
    g.n_ = n;
    g.form_ = std::move(unitary);
    return g;
}

GroupElement GroupElement::compose(const GroupElement &other) const {
    if (other.n_ != n_) {
        throw std::invalid_argument("GroupElement::compose: qubit count mismatch");
    }
    if (is_clifford() && other.is_clifford()) {
        const auto &a = clifford_form();
        const auto &b = other.clifford_form();
        // (Fa Pa)(Fb Pb) = Fa (Pa Fb Pa^dag) Pa Pb
        PauliString moved(permute_letters(a.perm, b.frame.letters), b.frame.phase);
        std::vector<std::size_t> perm(n_);
        for (std::size_t q = 0; q < n_; q++) {
            perm[q] = a.perm[b.perm[q]];
        }
        return clifford(std::move(perm), pauli_mul(a.frame, moved));
    }
    return dense(to_dense() * other.to_dense());
}

PauliSum GroupElement::conjugate(const PauliSum &op) const {
    if (op.num_qubits() != n_) {
        throw std::invalid_argument("GroupElement::conjugate: operator acts on " + std::to_string(op.num_qubits()) +
                                    " qubits, element on " + std::to_string(n_));
    }
    if (is_clifford()) {
        const auto &c = clifford_form();
        PauliSum out(n_);
        for (const auto &[letters, coeff] : op.terms()) {
            std::string moved = permute_letters(c.perm, letters);
            out.add(moved, pauli_commutes(c.frame.letters, moved) ? coeff : -coeff);
        }
        return out;
    }
    const DenseMatrix &u = std::get<DenseMatrix>(form_);
    return pauli_decompose(u * dense_matrix(op, n_) * u.adjoint());
}

DenseMatrix GroupElement::conjugate_matrix(const DenseMatrix &m) const {
    const std::size_t dim = std::size_t{1} << n_;
    if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim) {
        throw std::invalid_argument("GroupElement::conjugate_matrix: dimension mismatch");
    }
    if (!is_clifford()) {
        const DenseMatrix &u = std::get<DenseMatrix>(form_);
        return u * m * u.adjoint();
    }
    // U|c> = phase[c] |image[c]>, so (U m U^dag)[image r, image c] = phase[r] m[r,c] conj(phase[c]).
    const auto &cf = clifford_form();
    std::size_t xmask = 0, zmask = 0;
    int ny = 0;
    for (std::size_t q = 0; q < n_; q++) {
        const std::size_t bit = std::size_t{1} << (n_ - 1 - q);
        const char l = cf.frame.letters[q];
        if (l == 'X' || l == 'Y') {
            xmask |= bit;
        }
        if (l == 'Z' || l == 'Y') {
            zmask |= bit;
        }
        ny += l == 'Y';
    }
    static const complex_t ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const complex_t base = ipow[(ny + cf.frame.phase) % 4];
    std::vector<std::size_t> image(dim);
    std::vector<complex_t> phase(dim);
    for (std::size_t c = 0; c < dim; c++) {
        std::size_t moved = 0;
        for (std::size_t q = 0; q < n_; q++) {
            if ((c >> (n_ - 1 - q)) & 1) {
                moved |= std::size_t{1} << (n_ - 1 - cf.perm[q]);
            }
        }
        image[c] = moved ^ xmask;
        phase[c] = base * ((__builtin_popcountll(moved & zmask) & 1) ? -1.0 : 1.0);
    }
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < dim; r++) {
        for (std::size_t c = 0; c < dim; c++) {
            out(static_cast<Eigen::Index>(image[r]), static_cast<Eigen::Index>(image[c])) =
                phase[r] * m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * std::conj(phase[c]);
        }
    }
    return out;
}

DenseMatrix GroupElement::to_dense() const {
    if (!is_clifford()) {
        return std::get<DenseMatrix>(form_);
    }
    if (n_ > kMaxDenseQubits) {
        throw std::invalid_argument("GroupElement::to_dense: register too large");
    }
    const auto &c = clifford_form();
    return pauli_matrix(c.frame) * permutation_matrix(c.perm);
}

bool GroupElement::equivalent(const GroupElement &other, double tol) const {
    if (other.n_ != n_) {
        return false;
    }
    if (is_clifford() && other.is_clifford()) {
        return clifford_form().perm == other.clifford_form().perm &&
               clifford_form().frame.letters == other.clifford_form().frame.letters;
    }
    DenseMatrix a = to_dense(), b = other.to_dense();
    complex_t overlap = (a.adjoint() * b).trace() / static_cast<double>(a.rows());
    if (std::abs(std::abs(overlap) - 1.0) > tol) {
        return false;
    }
    return (b - overlap * a).cwiseAbs().maxCoeff() < tol;
}

bool GroupElement::is_identity() const { return equivalent(identity(n_)); }

std::vector<double> GroupElement::permute_features(std::span<const double> x) const {
    if (!is_clifford() || clifford_form().frame.weight() != 0) {
        throw std::invalid_argument("permute_features: element is not a pure qubit permutation");
    }
    const auto &perm = clifford_form().perm;
    if (x.size() != perm.size()) {
        throw std::invalid_argument("permute_features: feature count does not match the permutation");
    }
    std::vector<double> out(x.size());
    for (std::size_t q = 0; q < x.size(); q++) {
        out[perm[q]] = x[q];
    }
    return out;
}

bool SymmetryRep::contains_identity() const {
    return std::any_of(elements.begin(), elements.end(), [](const GroupElement &g) { return g.is_identity(); });
}

bool SymmetryRep::is_closed() const {
    for (const auto &a : elements) {
        for (const auto &b : elements) {
            GroupElement ab = a.compose(b);
            bool found = std::any_of(elements.begin(), elements.end(),
                                     [&](const GroupElement &g) { return g.equivalent(ab); });
            if (!found) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::size_t> SymmetryRep::orbit(std::size_t qubit) const {
    std::set<std::size_t> out;
    for (const auto &g : elements) {
        if (g.is_clifford()) {
            out.insert(g.clifford_form().perm.at(qubit));
        }
    }
    return {out.begin(), out.end()};
}

PauliSum twirl_finite(const SymmetryRep &rep, const PauliSum &op) {
    if (op.num_qubits() != rep.num_qubits) {
        throw std::invalid_argument("twirl_finite: operator acts on " + std::to_string(op.num_qubits()) +
                                    " qubits, representation on " + std::to_string(rep.num_qubits));
    }
    if (rep.elements.empty()) {
        throw std::invalid_argument("twirl_finite: empty representation");
    }
    PauliSum acc(op.num_qubits());
    const double w = 1.0 / static_cast<double>(rep.order());
    for (const auto &g : rep.elements) {
        acc.add(g.conjugate(op), w);
    }
    return acc;
}

PauliSum twirl_finite_dense(const SymmetryRep &rep, const PauliSum &op) {
    if (op.num_qubits() != rep.num_qubits) {
        throw std::invalid_argument("twirl_finite_dense: dimension mismatch");
    }
    const DenseMatrix m = dense_matrix(op, op.num_qubits());
    DenseMatrix acc = DenseMatrix::Zero(m.rows(), m.cols());
    for (const auto &g : rep.elements) {
        const DenseMatrix u = g.to_dense();
        acc += u * m * u.adjoint();
    }
    acc /= static_cast<double>(rep.order());
    return pauli_decompose(acc);
}

PauliSum twirl_haar_local(const HaarTwirlSpec &spec, const PauliSum &op) {
    if (op.num_qubits() != spec.num_qubits) {
        throw std::invalid_argument("twirl_haar_local: dimension mismatch");
    }
    const std::size_t n = op.num_qubits();
    PauliSum out(n);
    for (const auto &[letters, coeff] : op.terms()) {
        PauliString p(letters);
        const std::size_t w = p.weight();
        if (w > 2) {
            throw std::invalid_argument("twirl_haar_local: term " + letters + " has weight " + std::to_string(w) +
                                        " > 2");
        }
        if (w < 2) {
            // Tr(P)/2 * I for weight one, pure identity for weight zero: both dropped.
            continue;
        }
        auto sup = p.support();
        if (letters[sup[0]] != letters[sup[1]]) {
            continue;
        }
        // V^{(x)2} (s_a (x) s_a) V^dag{(x)2} averages to -1/3 I + 2/3 SWAP.
        for (char c : {'X', 'Y', 'Z'}) {
            std::string s(n, 'I');
            s[sup[0]] = c;
            s[sup[1]] = c;
            out.add(s, coeff / 3.0);
        }
    }
    return out;
}

bool proportional(const PauliSum &a, const PauliSum &b, double *ratio) {
    if (a.num_qubits() != b.num_qubits() || a.empty() || b.empty()) {
        return false;
    }
    double dot = 0;
    for (const auto &[letters, coeff] : a.terms()) {
        dot += coeff * b.coefficient(letters);
    }
    const double na = a.l2_norm(), nb = b.l2_norm();
    const double cosine = dot / (na * nb);
    if (std::abs(cosine) > 1.0 - 1e-10) {
        if (ratio) {
            *ratio = (cosine > 0 ? 1.0 : -1.0) * nb / na;
        }
        return true;
    }
    return false;
}

namespace {

template <typename Twirl>
GatesetReport symmetrize_with(const std::vector<PauliSum> &gateset, Twirl &&twirl) {
    GatesetReport report;
    for (std::size_t i = 0; i < gateset.size(); i++) {
        PauliSum t = twirl(gateset[i]);
        if (t.empty()) {
            report.trivialized.push_back(i);
            report.notes.push_back("generator " + std::to_string(i) + " (" + gateset[i].str() + ") trivialized");
            continue;
        }
        bool merged = false;
        for (std::size_t j = 0; j < report.generators.size(); j++) {
            double ratio = 0;
            if (proportional(report.generators[j], t, &ratio)) {
                report.merged.emplace_back(i, j);
                std::ostringstream note;
                note << "generator " << i << " (" << gateset[i].str() << ") merged into output " << j;
                if (ratio < 0) {
                    note << " with negative ratio " << ratio << " (sign absorbed by the angle)";
                }
                report.notes.push_back(note.str());
                merged = true;
                break;
            }
        }
        if (!merged) {
            report.generators.push_back(std::move(t));
        }
    }
    if (report.generators.empty() && !gateset.empty()) {
        report.notes.push_back("all generators trivialized");
    }
    return report;
}

}  // namespace

GatesetReport symmetrize_gateset(const std::vector<PauliSum> &gateset, const SymmetryRep &rep) {
    return symmetrize_with(gateset, [&](const PauliSum &g) { return twirl_finite(rep, g); });
}

GatesetReport symmetrize_gateset(const std::vector<PauliSum> &gateset, const HaarTwirlSpec &spec) {
    return symmetrize_with(gateset, [&](const PauliSum &g) { return twirl_haar_local(spec, g); });
}

CommuteReport check_commutes(const PauliSum &op, const SymmetryRep &rep, double tol) {
    if (op.num_qubits() != rep.num_qubits) {
        throw std::invalid_argument("check_commutes: dimension mismatch");
    }
    CommuteReport report;
    std::optional<DenseMatrix> dense_op;
    for (std::size_t s = 0; s < rep.elements.size(); s++) {
        const GroupElement &g = rep.elements[s];
        double v = 0;
        if (g.is_clifford()) {
            v = g.conjugate(op).max_coeff_diff(op);
        } else {
            if (!dense_op) {
                dense_op = dense_matrix(op, op.num_qubits());
            }
            const DenseMatrix u = g.to_dense();
            v = (*dense_op * u - u * *dense_op).cwiseAbs().maxCoeff();
        }
        if (v > report.max_violation) {
            report.max_violation = v;
            report.worst_element = s;
        }
    }
    report.commutes = report.max_violation < tol;
    return report;
}

SymmetryRep make_trivial_rep(std::size_t n) {
    return {"trivial", n, {GroupElement::identity(n)}};
}

SymmetryRep make_klein_rep() {
    GroupElement swap = GroupElement::permutation({1, 0});
    GroupElement xx = GroupElement::pauli(PauliString("XX"));
    return {"klein", 2, {GroupElement::identity(2), swap, xx, swap.compose(xx)}};
}

SymmetryRep make_exchange_rep() {
    return {"exchange", 2, {GroupElement::identity(2), GroupElement::permutation({1, 0})}};
}

SymmetryRep make_signflip_rep() {
    return {"signflip", 2, {GroupElement::identity(2), GroupElement::pauli(PauliString("XX"))}};
}

SymmetryRep make_parity_rep(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("make_parity_rep: n must be positive");
    }
    return {"parity", n, {GroupElement::identity(n), GroupElement::pauli(PauliString(std::string(n, 'X')))}};
}

std::vector<std::size_t> board_rotation() {
    std::vector<std::size_t> perm(9);
    for (std::size_t i = 0; i < 8; i++) {
        perm[i] = (i + 2) % 8;
    }
    perm[8] = 8;
    return perm;
}

std::vector<std::size_t> board_flip() {
    // SWAP_02 SWAP_73 SWAP_64; qubits 1, 5 and 8 lie on the axis.
    return {2, 1, 0, 7, 6, 5, 4, 3, 8};
}

SymmetryRep make_z4_rep() {
    SymmetryRep rep{"z4", 9, {}};
    GroupElement r = GroupElement::permutation(board_rotation());
    GroupElement g = GroupElement::identity(9);
    for (int k = 0; k < 4; k++) {
        rep.elements.push_back(g);
        g = r.compose(g);
    }
    return rep;
}

SymmetryRep make_d4_rep() {
    SymmetryRep rep = make_z4_rep();
    rep.name = "d4";
    GroupElement f = GroupElement::permutation(board_flip());
    for (int k = 0; k < 4; k++) {
        rep.elements.push_back(rep.elements[static_cast<std::size_t>(k)].compose(f));
    }
    return rep;
}

SymmetryRep make_rep(const std::string &name, std::size_t n) {
    if (name == "klein") {
        return make_klein_rep();
    }
    if (name == "exchange") {
        return make_exchange_rep();
    }
    if (name == "signflip") {
        return make_signflip_rep();
    }
    if (name == "parity") {
        return make_parity_rep(n);
    }
    if (name == "d4") {
        return make_d4_rep();
    }
    if (name == "z4") {
        return make_z4_rep();
    }
    if (name == "trivial") {
        return make_trivial_rep(n);
    }
    throw std::invalid_argument("Unknown representation '" + name + "'");
}

}  // namespace symmqvar
