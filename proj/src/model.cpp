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

#include "symmqvar/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "symmqvar/datasets.hpp"

namespace symmqvar {

namespace {

constexpr std::string_view kAlphabet = "tcemoid";
constexpr std::size_t kMiddle = 8;

PauliSum single_z_sum(const std::vector<std::size_t> &qubits, char letter, double coeff) {
    PauliSum out(ReuploadModel::kQubits);
    for (std::size_t q : qubits) {
        out.add(PauliString::single(ReuploadModel::kQubits, q, letter).letters, coeff);
    }
    return out;
}

/// Controlled rotation generator (A_t - Z_c A_t) / 4 so that exp(-i theta G)
/// is the controlled R_A(theta).
void add_controlled(PauliSum &gen, std::size_t control, std::size_t target, char axis) {
    std::string t(ReuploadModel::kQubits, 'I');
    t[target] = axis;
    std::string ct = t;
    ct[control] = 'Z';
    gen.add(t, 0.25);
    gen.add(ct, -0.25);
}

}  // namespace

const std::vector<std::size_t> &corner_qubits() {
    static const std::vector<std::size_t> q = {0, 2, 4, 6};
    return q;
}

const std::vector<std::size_t> &edge_qubits() {
    static const std::vector<std::size_t> q = {1, 3, 5, 7};
    return q;
}

void validate_layout(const std::string &layout) {
    if (layout.empty() || layout.front() != 't') {
        throw std::invalid_argument("layout must start with the encoding letter 't'");
    }
    for (char c : layout) {
        if (kAlphabet.find(c) == std::string_view::npos) {
            throw std::invalid_argument(std::string("layout contains unknown letter '") + c + "'");
        }
    }
    if (layout.find_first_not_of('t') == std::string::npos) {
        throw std::invalid_argument("layout has no trainable letters");
    }
}

std::string random_layout(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::string out = "t";
    for (int block = 0; block < 3; block++) {
        std::string perm;
        do {
            perm = "cemoid";
            for (std::size_t i = perm.size(); i > 1; i--) {
                std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng() % i)]);
            }
        } while (out.back() == perm.front());
        out += perm;
    }
    return out;
}

ReuploadModel::ReuploadModel(ModelSpec spec) : spec_(std::move(spec)) {
    validate_layout(spec_.layout);
    if (spec_.l == 0 || spec_.p == 0) {
        throw std::invalid_argument("model needs l >= 1 and p >= 1");
    }
    if (spec_.entangler != 'X' && spec_.entangler != 'Y' && spec_.entangler != 'Z') {
        throw std::invalid_argument("entangler axis must be X, Y or Z");
    }
    embedding_ = EmbeddingSpec::feature_wise('X', 2.0 * std::numbers::pi / 3.0, kQubits, kQubits);
    if (spec_.task == ModelTask::TicTacToe) {
        symmetry_ = make_d4_rep();
        observables_ = {single_z_sum(corner_qubits(), 'Z', 0.25), single_z_sum({kMiddle}, 'Z', 1.0),
                        single_z_sum(edge_qubits(), 'Z', 0.25)};
    } else {
        symmetry_ = make_z4_rep();
        observables_ = {single_z_sum({kMiddle}, 'Z', 1.0)};
    }
    build();
}

std::size_t ReuploadModel::new_slot(bool shared) {
    if (shared) {
        shared_slots_.push_back(param_count_);
    }
    return param_count_++;
}

void ReuploadModel::add_single_layer(Segment &seg, const std::vector<std::size_t> &qubits) {
    static constexpr char kEuler[3] = {'Z', 'Y', 'Z'};
    if (spec_.invariant) {
        for (char axis : kEuler) {
            seg.gates.push_back(Gate::parametrized(single_z_sum(qubits, axis, 1.0), new_slot(true), 0.5));
        }
        return;
    }
    for (std::size_t q : qubits) {
        for (char axis : kEuler) {
            seg.gates.push_back(Gate::parametrized(single_z_sum({q}, axis, 1.0), new_slot(false), 0.5));
        }
    }
}

void ReuploadModel::add_entangler_layer(Segment &seg, const std::vector<std::pair<std::size_t, std::size_t>> &pairs,
                                        bool split_orientation) {
    const char axis = spec_.entangler;
    if (!spec_.invariant) {
        for (auto [c, t] : pairs) {
            PauliSum gen(kQubits);
            add_controlled(gen, c, t, axis);
            seg.gates.push_back(Gate::parametrized(gen, new_slot(false)));
        }
        return;
    }
    if (!split_orientation) {
        PauliSum gen(kQubits);
        for (auto [c, t] : pairs) {
            add_controlled(gen, c, t, axis);
        }
        seg.gates.push_back(Gate::parametrized(gen, new_slot(true)));
        return;
    }
    // Rotations alone do not relate clockwise and counter-clockwise pairs.
    PauliSum cw(kQubits), ccw(kQubits);
    for (auto [c, t] : pairs) {
        add_controlled(t == (c + 1) % 8 ? cw : ccw, c, t, axis);
    }
    seg.gates.push_back(Gate::parametrized(cw, new_slot(true)));
    seg.gates.push_back(Gate::parametrized(ccw, new_slot(true)));
}

void ReuploadModel::build() {
    std::vector<std::pair<std::size_t, std::size_t>> outer, inner, diag;
    for (std::size_t c : corner_qubits()) {
        outer.emplace_back(c, (c + 1) % 8);
        outer.emplace_back(c, (c + 7) % 8);
        diag.emplace_back(kMiddle, c);
    }
    for (std::size_t e : edge_qubits()) {
        inner.emplace_back(e, kMiddle);
    }
    const bool split = spec_.task == ModelTask::Driving;
    const std::string body = spec_.layout.substr(1);

    for (std::size_t layer = 0; layer < spec_.l; layer++) {
        segments_.push_back({true, {}});
        for (std::size_t rep = 0; rep < spec_.p; rep++) {
            for (char letter : body) {
                if (letter == 't') {
                    segments_.push_back({true, {}});
                    continue;
                }
                if (segments_.back().encoding) {
                    segments_.push_back({false, {}});
                }
                Segment &seg = segments_.back();
                switch (letter) {
                    case 'c':
                        add_single_layer(seg, corner_qubits());
                        break;
                    case 'e':
                        add_single_layer(seg, edge_qubits());
                        break;
                    case 'm':
                        add_single_layer(seg, {kMiddle});
                        break;
                    case 'o':
                        add_entangler_layer(seg, outer, split);
                        break;
                    case 'i':
                        add_entangler_layer(seg, inner, false);
                        break;
                    case 'd':
                        add_entangler_layer(seg, diag, false);
                        break;
                    default:
                        break;
                }
            }
        }
    }
}

Circuit ReuploadModel::circuit(std::span<const double> x) const {
    const Circuit enc = encode(embedding_, x);
    Circuit out(kQubits, param_count_);
    for (const auto &seg : segments_) {
        if (seg.encoding) {
            out.append(enc);
        } else {
            for (const auto &g : seg.gates) {
                out.add(g);
            }
        }
    }
    return out;
}

Circuit ReuploadModel::trainable_circuit() const {
    Circuit out(kQubits, param_count_);
    for (const auto &seg : segments_) {
        for (const auto &g : seg.gates) {
            out.add(g);
        }
    }
    return out;
}

std::vector<double> ReuploadModel::predict(std::span<const double> params, std::span<const double> x) const {
    if (params.size() != param_count_) {
        throw std::invalid_argument("predict: expected " + std::to_string(param_count_) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    const StateVector psi = run_circuit(circuit(x), params);
    std::vector<double> out;
    out.reserve(observables_.size());
    for (const auto &o : observables_) {
        out.push_back(expectation(psi, o));
    }
    if (spec_.task == ModelTask::Driving) {
        out[0] = (out[0] + 1.0) / 2.0;
    }
    return out;
}

double ReuploadModel::loss_and_gradient(std::span<const double> params, std::span<const double> x,
                                        std::span<const double> target, std::vector<double> &grad) const {
    if (params.size() != param_count_) {
        throw std::invalid_argument("loss_and_gradient: parameter length mismatch");
    }
    if (target.size() != observables_.size()) {
        throw std::invalid_argument("loss_and_gradient: target length mismatch");
    }
    const Circuit c = circuit(x);
    StateVector psi = run_circuit(c, params);
    PauliSum effective(kQubits);
    double loss = 0;
    for (std::size_t k = 0; k < observables_.size(); k++) {
        double value = expectation(psi, observables_[k]);
        // d(yhat)/d<O> is 1/2 for the normalized driving output.
        double chain = 1.0;
        if (spec_.task == ModelTask::Driving) {
            value = (value + 1.0) / 2.0;
            chain = 0.5;
        }
        const double r = value - target[k];
        loss += r * r;
        effective.add(observables_[k], 2.0 * r * chain);
    }
    grad = gradient_from_state(c, params, std::move(psi), CompiledOperator::compile(effective));
    return loss;
}

std::size_t ReuploadModel::classify(std::span<const double> prediction) const {
    if (spec_.task == ModelTask::Driving) {
        return nearest_difficulty_index(prediction[0]);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < prediction.size(); k++) {
        if (prediction[k] > prediction[best]) {
            best = k;
        }
    }
    return best;
}

ReuploadModel build_ttt_model(std::size_t l, std::size_t p, const std::string &layout, bool invariant,
                              char entangler) {
    return ReuploadModel({ModelTask::TicTacToe, l, p, layout, invariant, entangler});
}

ReuploadModel build_driving_model(std::size_t l, std::size_t p, const std::string &layout, bool invariant) {
    return ReuploadModel({ModelTask::Driving, l, p, layout, invariant, 'Z'});
}

double l2_loss(const std::vector<std::vector<double>> &predictions, const std::vector<std::vector<double>> &targets) {
    if (predictions.size() != targets.size() || predictions.empty()) {
        throw std::invalid_argument("l2_loss: prediction and target counts differ or are empty");
    }
    double total = 0;
    for (std::size_t i = 0; i < predictions.size(); i++) {
        if (predictions[i].size() != targets[i].size()) {
            throw std::invalid_argument("l2_loss: shape mismatch at sample " + std::to_string(i));
        }
        for (std::size_t k = 0; k < targets[i].size(); k++) {
            const double r = predictions[i][k] - targets[i][k];
            total += r * r;
        }
    }
    return total / static_cast<double>(predictions.size());
}

double check_model_invariance(const ReuploadModel &model, std::span<const double> params,
                              const std::vector<std::vector<double>> &inputs, const SymmetryRep &rep) {
    double worst = 0;
    for (const auto &x : inputs) {
        const auto base = model.predict(params, x);
        for (const auto &g : rep.elements) {
            if (g.is_identity()) {
                continue;
            }
            const auto moved = model.predict(params, g.permute_features(x));
            for (std::size_t k = 0; k < base.size(); k++) {
                worst = std::max(worst, std::abs(moved[k] - base[k]));
            }
        }
    }
    return worst;
}

}  // namespace symmqvar
