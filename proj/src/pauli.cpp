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

#include "symmqvar/pauli.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace symmqvar {

namespace {

int letter_index(char c) {
    switch (c) {
        case 'I':
            return 0;
        case 'X':
            return 1;
        case 'Y':
            return 2;
        case 'Z':
            return 3;
    }
    throw std::invalid_argument(std::string("Not a Pauli letter: '") + c + "'");
}

constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

void check_letters(const std::string &letters) {
    for (char c : letters) {
        letter_index(c);
    }
}

}  // namespace

PauliString::PauliString(std::string letters_, std::uint8_t phase_) : letters(std::move(letters_)), phase(phase_ % 4) {
    check_letters(letters);
}

PauliString PauliString::identity(std::size_t n) {
    return PauliString(std::string(n, 'I'));
}

PauliString PauliString::single(std::size_t n, std::size_t q, char letter) {
    if (q >= n) {
        throw std::out_of_range("Qubit index " + std::to_string(q) + " out of range for " + std::to_string(n) + " qubits");
    }
    std::string s(n, 'I');
    s[q] = letter;
    return PauliString(std::move(s));
}

std::size_t PauliString::weight() const {
    std::size_t w = 0;
    for (char c : letters) {
        w += c != 'I';
    }
    return w;
}

std::vector<std::size_t> PauliString::support() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < letters.size(); q++) {
        if (letters[q] != 'I') {
            out.push_back(q);
        }
    }
    return out;
}

complex_t PauliString::phase_value() const {
    static const complex_t table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase];
}

std::string PauliString::str() const {
    static const char *prefix[4] = {"+", "+i", "-", "-i"};
    return prefix[phase] + letters;
}

PauliString pauli_mul(const PauliString &a, const PauliString &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("pauli_mul: length mismatch (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    PauliString out;
    out.letters.resize(a.size());
    int phase = a.phase + b.phase;
    for (std::size_t q = 0; q < a.size(); q++) {
        int x = letter_index(a.letters[q]);
        int y = letter_index(b.letters[q]);
        if (x == 0) {
            out.letters[q] = kLetters[y];
        } else if (y == 0) {
            out.letters[q] = kLetters[x];
        } else if (x == y) {
            out.letters[q] = 'I';
        } else {
            out.letters[q] = kLetters[6 - x - y];
            // XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
            phase += ((y - x + 3) % 3 == 1) ? 1 : 3;
        }
    }
    out.phase = static_cast<std::uint8_t>(phase % 4);
    return out;
}

bool pauli_commutes(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("pauli_commutes: length mismatch");
    }
    int anti = 0;
    for (std::size_t q = 0; q < a.size(); q++) {
        anti += a[q] != 'I' && b[q] != 'I' && a[q] != b[q];
    }
    return anti % 2 == 0;
}

PauliSum::PauliSum(std::size_t n, std::initializer_list<std::pair<std::string, double>> terms) : n_(n) {
    for (const auto &[letters, coeff] : terms) {
        add(letters, coeff);
    }
}

PauliSum PauliSum::from_pauli(const PauliString &p, double coeff) {
    if (!p.is_hermitian()) {
        throw std::invalid_argument("Pauli string " + p.str() + " is not Hermitian");
    }
    PauliSum out(p.size());
    out.add(p.letters, p.phase == 2 ? -coeff : coeff);
    return out;
}

PauliSum PauliSum::parse_term(std::size_t n, std::string_view text) {
    std::string letters(n, 'I');
    double coeff = 1.0;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "*") {
            continue;
        }
        if (tok[0] == '-' || tok[0] == '+') {
            if (tok.size() > 1 && std::isalpha(static_cast<unsigned char>(tok[1]))) {
                if (tok[0] == '-') {
                    coeff = -coeff;
                }
                tok = tok.substr(1);
            }
        }
        if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
            char c = tok[0];
            letter_index(c);
            std::size_t q = std::stoul(tok.substr(1));
            if (q >= n) {
                throw std::out_of_range("Qubit index " + std::to_string(q) + " out of range in '" + std::string(text) +
                                        "'");
            }
            if (letters[q] != 'I') {
                throw std::invalid_argument("Qubit " + std::to_string(q) + " repeated in '" + std::string(text) + "'");
            }
            letters[q] = c;
        } else {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) {
                throw std::invalid_argument("Bad token '" + tok + "' in Pauli term");
            }
            coeff *= v;
        }
    }
    PauliSum out(n);
    out.add(letters, coeff);
    return out;
}

double PauliSum::coefficient(const std::string &letters) const {
    auto it = terms_.find(letters);
    return it == terms_.end() ? 0.0 : it->second;
}

void PauliSum::add(const std::string &letters, double coeff) {
    if (letters.size() != n_) {
        throw std::invalid_argument("Term '" + letters + "' does not act on " + std::to_string(n_) + " qubits");
    }
    if (!std::isfinite(coeff)) {
        throw std::invalid_argument("Non-finite coefficient for term '" + letters + "'");
    }
    check_letters(letters);
    auto [it, inserted] = terms_.try_emplace(letters, 0.0);
    it->second += coeff;
    if (std::abs(it->second) < kDedupTolerance) {
        terms_.erase(it);
    }
}

void PauliSum::add(const PauliSum &other, double scale) {
    if (other.n_ != n_) {
        throw std::invalid_argument("PauliSum qubit count mismatch (" + std::to_string(n_) + " vs " +
                                    std::to_string(other.n_) + ")");
    }
    for (const auto &[letters, coeff] : other.terms_) {
        add(letters, coeff * scale);
    }
}

PauliSum PauliSum::operator+(const PauliSum &other) const {
    PauliSum out = *this;
    out.add(other);
    return out;
}

PauliSum PauliSum::operator-(const PauliSum &other) const {
    PauliSum out = *this;
    out.add(other, -1.0);
    return out;
}

PauliSum PauliSum::operator*(double s) const {
    PauliSum out(n_);
    out.add(*this, s);
    return out;
}

double PauliSum::max_coeff_diff(const PauliSum &other) const {
    double worst = 0;
    for (const auto &[letters, coeff] : terms_) {
        worst = std::max(worst, std::abs(coeff - other.coefficient(letters)));
    }
    for (const auto &[letters, coeff] : other.terms_) {
        if (!terms_.contains(letters)) {
            worst = std::max(worst, std::abs(coeff));
        }
    }
    return worst;
}

double PauliSum::l2_norm() const {
    double s = 0;
    for (const auto &kv : terms_) {
        s += kv.second * kv.second;
    }
    return std::sqrt(s);
}

std::size_t PauliSum::max_weight() const {
    std::size_t w = 0;
    for (const auto &kv : terms_) {
        w = std::max(w, PauliString(kv.first).weight());
    }
    return w;
}

std::vector<std::size_t> PauliSum::support() const {
    std::vector<bool> touched(n_, false);
    for (const auto &kv : terms_) {
        for (std::size_t q = 0; q < n_; q++) {
            touched[q] = touched[q] || kv.first[q] != 'I';
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n_; q++) {
        if (touched[q]) {
            out.push_back(q);
        }
    }
    return out;
}

bool PauliSum::terms_commute() const {
    for (auto a = terms_.begin(); a != terms_.end(); ++a) {
        for (auto b = std::next(a); b != terms_.end(); ++b) {
            if (!pauli_commutes(a->first, b->first)) {
                return false;
            }
        }
    }
    return true;
}

PauliSum PauliSum::without_identity() const {
    PauliSum out = *this;
    out.terms_.erase(std::string(n_, 'I'));
    return out;
}

std::string PauliSum::str() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto &[letters, coeff] : terms_) {
        if (!first) {
            out << (coeff < 0 ? " - " : " + ");
        } else if (coeff < 0) {
            out << "-";
        }
        first = false;
        out << std::abs(coeff) << "*" << letters;
    }
    return out.str();
}

PauliSum multiply(const PauliSum &a, const PauliSum &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("multiply: qubit count mismatch");
    }
    std::map<std::string, complex_t> acc;
    for (const auto &[la, ca] : a.terms()) {
        for (const auto &[lb, cb] : b.terms()) {
            PauliString p = pauli_mul(PauliString(la), PauliString(lb));
            acc[p.letters] += ca * cb * p.phase_value();
        }
    }
    PauliSum out(a.num_qubits());
    for (const auto &[letters, c] : acc) {
        if (std::abs(c.imag()) > 1e-10) {
            throw std::invalid_argument("multiply: product is not Hermitian (term " + letters + ")");
        }
        out.add(letters, c.real());
    }
    return out;
}

}  // namespace symmqvar
