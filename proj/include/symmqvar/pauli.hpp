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

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symmqvar {

using complex_t = std::complex<double>;

/// Coefficients with magnitude below this are dropped from a PauliSum.
inline constexpr double kDedupTolerance = 1e-12;

/// A tensor product of single-qubit Paulis with a phase in {+1, +i, -1, -i}.
///
/// Letters are stored as text over {I,X,Y,Z}; index 0 is qubit 0. The phase is
/// kept as the exponent k of i^k.
struct PauliString {
    std::string letters;
    std::uint8_t phase = 0;

    PauliString() = default;
    explicit PauliString(std::string letters_, std::uint8_t phase_ = 0);

    static PauliString identity(std::size_t n);
    /// Single-letter string on qubit `q` of an n-qubit register.
    static PauliString single(std::size_t n, std::size_t q, char letter);

    std::size_t size() const { return letters.size(); }
    std::size_t weight() const;
    std::vector<std::size_t> support() const;
    bool is_hermitian() const { return phase % 2 == 0; }
    complex_t phase_value() const;
    std::string str() const;

    bool operator==(const PauliString &other) const = default;
};

/// Product a*b with the phase tracked exactly. Throws on length mismatch.
PauliString pauli_mul(const PauliString &a, const PauliString &b);

/// True iff the two strings commute (even number of anticommuting positions).
bool pauli_commutes(std::string_view a, std::string_view b);

/// Hermitian operator as a real-weighted sum of Pauli words.
class PauliSum {
   public:
    PauliSum() = default;
    explicit PauliSum(std::size_t n) : n_(n) {}
    PauliSum(std::size_t n, std::initializer_list<std::pair<std::string, double>> terms);

    /// Hermitian Pauli string as a sum; imaginary phases are rejected.
    static PauliSum from_pauli(const PauliString &p, double coeff = 1.0);
    /// Parses compact notation such as "0.5 X0 X1" or "-Z2"; see io for the list form.
    static PauliSum parse_term(std::size_t n, std::string_view text);

    std::size_t num_qubits() const { return n_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::map<std::string, double> &terms() const { return terms_; }

    double coefficient(const std::string &letters) const;
    void add(const std::string &letters, double coeff);
    void add(const PauliSum &other, double scale = 1.0);

    PauliSum operator+(const PauliSum &other) const;
    PauliSum operator-(const PauliSum &other) const;
    PauliSum operator*(double s) const;

    /// Largest absolute difference between coefficients of the two sums.
    double max_coeff_diff(const PauliSum &other) const;
    double l2_norm() const;
    /// Max weight over terms (0 for the empty sum).
    std::size_t max_weight() const;
    /// Union of qubits touched by any non-identity letter, ascending.
    std::vector<std::size_t> support() const;
    /// True iff every pair of terms commutes.
    bool terms_commute() const;
    /// The sum without its all-identity term.
    PauliSum without_identity() const;

    std::string str() const;

    bool operator==(const PauliSum &other) const = default;

   private:
    std::size_t n_ = 0;
    std::map<std::string, double> terms_;
};

/// Operator product of two sums. Throws if the result is not Hermitian.
PauliSum multiply(const PauliSum &a, const PauliSum &b);

}  // namespace symmqvar
