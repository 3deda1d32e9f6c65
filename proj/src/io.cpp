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

#include "symmqvar/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace symmqvar {

json to_json(const PauliSum &op) {
    json terms = json::array();
    for (const auto &[letters, coeff] : op.terms()) {
        terms.push_back({{"pauli", letters}, {"coeff", coeff}});
    }
    return {{"n", op.num_qubits()}, {"terms", terms}};
}

PauliSum pauli_sum_from_json(const json &j, std::size_t n) {
    if (j.is_string()) {
        if (n == 0) {
            throw std::invalid_argument("term string needs a qubit count");
        }
        return PauliSum::parse_term(n, j.get<std::string>());
    }
    if (j.is_array()) {
        PauliSum out(n);
        for (const auto &t : j) {
            if (!t.is_string()) {
                throw std::invalid_argument("a term list must contain strings");
            }
            out.add(PauliSum::parse_term(n, t.get<std::string>()));
        }
        return out;
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("terms")) {
        throw std::invalid_argument("Pauli sum must be a string, a list or an object with n and terms");
    }
    const auto m = j.at("n").get<std::size_t>();
    if (n != 0 && m != n) {
        throw std::invalid_argument("Pauli sum qubit count does not match the register");
    }
    PauliSum out(m);
    for (const auto &t : j.at("terms")) {
        const auto letters = t.at("pauli").get<std::string>();
        if (letters.size() != m || letters.find_first_not_of("IXYZ") != std::string::npos) {
            throw std::invalid_argument("invalid Pauli word '" + letters + "'");
        }
        out.add(letters, t.at("coeff").get<double>());
    }
    return out;
}

json to_json(const SymmetryRep &rep) {
    json elements = json::array();
    for (const auto &g : rep.elements) {
        if (g.is_clifford()) {
            const auto &f = g.clifford_form();
            elements.push_back({{"perm", f.perm}, {"frame", f.frame.str()}});
        } else {
            elements.push_back({{"dense", format_matrix(g.to_dense())}});
        }
    }
    return {{"name", rep.name}, {"n", rep.num_qubits}, {"elements", elements}};
}

json to_json(const GatesetReport &report) {
    json gens = json::array();
    for (const auto &g : report.generators) {
        gens.push_back({{"text", g.str()}, {"operator", to_json(g)}});
    }
    json merged = json::array();
    for (auto [in, out] : report.merged) {
        merged.push_back({{"input", in}, {"into", out}});
    }
    return {{"generators", gens}, {"trivialized", report.trivialized}, {"merged", merged}, {"notes", report.notes}};
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path &path, std::vector<std::string> header)
    : out_(path), width_(header.size()) {
    if (!out_) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    row(header);
}

void CsvWriter::row(const std::vector<std::string> &cells) {
    if (cells.size() != width_) {
        throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                                    std::to_string(width_));
    }
    for (std::size_t i = 0; i < cells.size(); i++) {
        if (i > 0) {
            out_ << ',';
        }
        out_ << cells[i];
    }
    out_ << '\n';
}

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path &path, const json &j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << j.dump(2) << '\n';
}

}  // namespace symmqvar
