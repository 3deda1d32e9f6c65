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
#include <functional>
#include <string>
#include <vector>

#include "symmqvar/model.hpp"
#include "symmqvar/optim.hpp"

namespace symmqvar {

struct Sample {
    std::vector<double> x;
    std::vector<double> y;      // regression target of the model outputs
    std::size_t label = 0;      // class index for accuracy
};

/// Turns datasets into model samples.
std::vector<Sample> ttt_samples(const std::vector<std::size_t> &indices);
std::vector<Sample> driving_samples(const std::vector<std::size_t> &indices);

enum class OptimizerKind { Adam, Lbfgs };

struct TrainConfig {
    OptimizerKind optimizer = OptimizerKind::Adam;
    std::size_t epochs = 100;          // Adam epochs, or L-BFGS steps
    std::size_t steps_per_epoch = 30;  // Adam only
    std::size_t batch_size = 15;       // Adam only
    double learning_rate = 0.01;
    std::uint64_t seed = 0;
    double init_low = 0.0;
    double init_high = 6.283185307179586;
    /// Random steps at which the batch gradient is compared with central finite
    /// differences; capped at the number of steps.
    std::size_t gradient_checks = 0;

    /// Throws std::invalid_argument on non-positive counts or an empty init range.
    void validate() const;

    static TrainConfig ttt_protocol(std::uint64_t seed);
    static TrainConfig driving_protocol(std::uint64_t seed);
};

struct MetricsRow {
    std::size_t index = 0;  // epoch (Adam) or step (L-BFGS), 1-based
    double train_loss = 0;
    double train_acc = 0;
    double test_loss = 0;
    double test_acc = 0;
};

struct MetricsSeries {
    std::vector<MetricsRow> rows;
    std::vector<double> initial_params;
    std::vector<double> final_params;
    /// Largest relative adjoint-vs-finite-difference error per gradient check.
    std::vector<double> gradient_check_errors;
};

struct Evaluation {
    double loss = 0;
    double accuracy = 0;
};

Evaluation evaluate(const ReuploadModel &model, std::span<const double> params, const std::vector<Sample> &data);

/// Mean loss and gradient over the listed samples, summed in index order.
double batch_loss_and_gradient(const ReuploadModel &model, std::span<const double> params,
                               const std::vector<Sample> &data, std::span<const std::size_t> batch,
                               std::vector<double> &grad);

/// Uniform initialization from the config's range and seed.
std::vector<double> initial_parameters(std::size_t count, const TrainConfig &config);

/// Runs one training protocol. Throws DivergenceError with the step index
/// when the loss becomes non-finite.
MetricsSeries train(const ReuploadModel &model, const std::vector<Sample> &train_set,
                    const std::vector<Sample> &test_set, const TrainConfig &config);

/// Uniform double in [0, 1) from 53 random bits.
double uniform01(std::uint64_t bits);

}  // namespace symmqvar
