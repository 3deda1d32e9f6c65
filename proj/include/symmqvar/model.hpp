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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "symmqvar/circuit.hpp"
#include "symmqvar/embedding.hpp"
#include "symmqvar/symmetry.hpp"

namespace symmqvar {

/// Layer layouts over {t,c,e,m,o,i,d}:
///   t  data encoding
///   c  single-qubit layer on the corners, e on the edges, m on the middle
///   o  corner -> edge entangler, i edge -> middle, d middle -> corner
/// A layout starts with t and holds at least one trainable letter.
void validate_layout(const std::string &layout);

/// "t" followed by three permutations of "cemoid" with no equal neighbours.
std::string random_layout(std::uint64_t seed);

enum class ModelTask { TicTacToe, Driving };

struct ModelSpec {
    ModelTask task = ModelTask::TicTacToe;
    std::size_t l = 1;
    std::size_t p = 1;
    std::string layout = "tcemoid";
    bool invariant = true;
    char entangler = 'Y';  // axis of the controlled rotations
};

/// Re-uploading model: l repetitions of [encode(x); body^p] on |0...0>, where
/// body is the layout without its leading 't'. A 't' inside the body encodes
/// the data again.
class ReuploadModel {
   public:
    explicit ReuploadModel(ModelSpec spec);

    const ModelSpec &spec() const { return spec_; }
    std::size_t num_qubits() const { return kQubits; }
    std::size_t param_count() const { return param_count_; }
    const std::vector<PauliSum> &observables() const { return observables_; }
    const SymmetryRep &symmetry() const { return symmetry_; }
    const EmbeddingSpec &embedding() const { return embedding_; }
    /// Slots whose parameter is shared by a whole symmetry class (invariant models).
    const std::vector<std::size_t> &shared_slots() const { return shared_slots_; }

    /// Full circuit for input x, encoding gates included.
    Circuit circuit(std::span<const double> x) const;
    /// Trainable gates only, with encodings left out (used for generator checks).
    Circuit trainable_circuit() const;

    /// TTT: (<O_circle>, <O_draw>, <O_cross>). Driving: {(<Z_8> + 1) / 2}.
    std::vector<double> predict(std::span<const double> params, std::span<const double> x) const;
    /// Squared-error loss for one sample and its parameter gradient (adjoint).
    double loss_and_gradient(std::span<const double> params, std::span<const double> x,
                             std::span<const double> target, std::vector<double> &grad) const;
    /// Class index: argmax (lowest index on ties) or nearest difficulty.
    std::size_t classify(std::span<const double> prediction) const;

    static constexpr std::size_t kQubits = 9;

   private:
    // A body segment: either an encoding marker or trainable gates.
    struct Segment {
        bool encoding = false;
        std::vector<Gate> gates;
    };

    void build();
    void add_single_layer(Segment &seg, const std::vector<std::size_t> &qubits);
    void add_entangler_layer(Segment &seg, const std::vector<std::pair<std::size_t, std::size_t>> &pairs,
                             bool split_orientation);
    std::size_t new_slot(bool shared);

    ModelSpec spec_;
    EmbeddingSpec embedding_;
    SymmetryRep symmetry_;
    std::vector<PauliSum> observables_;
    std::vector<Segment> segments_;
    std::size_t param_count_ = 0;
    std::vector<std::size_t> shared_slots_;
};

ReuploadModel build_ttt_model(std::size_t l, std::size_t p, const std::string &layout, bool invariant,
                              char entangler = 'Y');
ReuploadModel build_driving_model(std::size_t l, std::size_t p, const std::string &layout, bool invariant);

/// Mean over samples of the squared Euclidean distance. Throws on shape mismatch.
double l2_loss(const std::vector<std::vector<double>> &predictions, const std::vector<std::vector<double>> &targets);

/// max over inputs and group elements of |predict(V_s x) - predict(x)|_inf.
double check_model_invariance(const ReuploadModel &model, std::span<const double> params,
                              const std::vector<std::vector<double>> &inputs, const SymmetryRep &rep);

/// Corner, edge and middle qubits of the board.
const std::vector<std::size_t> &corner_qubits();
const std::vector<std::size_t> &edge_qubits();

}  // namespace symmqvar
