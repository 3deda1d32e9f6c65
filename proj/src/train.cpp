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

#include "symmqvar/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "symmqvar/datasets.hpp"

namespace symmqvar {

namespace {

const std::vector<TttGame> &ttt_games() {
    static const std::vector<TttGame> games = enumerate_ttt();
    return games;
}

const std::vector<DrivingScenario> &driving_scenarios() {
    static const std::vector<DrivingScenario> scenarios = enumerate_driving();
    return scenarios;
}

void check_finite(double v, std::size_t step, const char *what) {
    if (!std::isfinite(v)) {
        throw DivergenceError(std::string(what) + " is not finite at step " + std::to_string(step), step);
    }
}

}  // namespace

double uniform01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<Sample> ttt_samples(const std::vector<std::size_t> &indices) {
    const auto &games = ttt_games();
    std::vector<Sample> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        const auto &g = games.at(i);
        const auto y = g.one_hot();
        out.push_back({g.features(), {y.begin(), y.end()}, static_cast<std::size_t>(g.label)});
    }
    return out;
}

std::vector<Sample> driving_samples(const std::vector<std::size_t> &indices) {
    const auto &scenarios = driving_scenarios();
    std::vector<Sample> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        const auto &s = scenarios.at(i);
        out.push_back({s.features(), {s.difficulty}, s.difficulty_index()});
    }
    return out;
}

void TrainConfig::validate() const {
    if (epochs == 0) {
        throw std::invalid_argument("train config: epochs must be positive");
    }
    if (optimizer == OptimizerKind::Adam && (steps_per_epoch == 0 || batch_size == 0)) {
        throw std::invalid_argument("train config: steps_per_epoch and batch_size must be positive");
    }
    if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("train config: learning_rate must be finite and non-negative");
    }
    if (!(init_high > init_low)) {
        throw std::invalid_argument("train config: empty initialization range");
    }
}

TrainConfig TrainConfig::ttt_protocol(std::uint64_t seed) {
    TrainConfig c;
    c.seed = seed;
    return c;
}

TrainConfig TrainConfig::driving_protocol(std::uint64_t seed) {
    TrainConfig c;
    c.optimizer = OptimizerKind::Lbfgs;
    c.epochs = 30;
    c.seed = seed;
    return c;
}

std::vector<double> initial_parameters(std::size_t count, const TrainConfig &config) {
    std::mt19937_64 rng(config.seed);
    std::vector<double> out(count);
    for (double &v : out) {
        v = config.init_low + (config.init_high - config.init_low) * uniform01(rng());
    }
    return out;
}

Evaluation evaluate(const ReuploadModel &model, std::span<const double> params, const std::vector<Sample> &data) {
    Evaluation ev;
    if (data.empty()) {
        return ev;
    }
    std::size_t correct = 0;
    for (const auto &s : data) {
        const auto pred = model.predict(params, s.x);
        for (std::size_t k = 0; k < pred.size(); k++) {
            const double r = pred[k] - s.y[k];
            ev.loss += r * r;
        }
        if (model.classify(pred) == s.label) {
            correct++;
        }
    }
    ev.loss /= static_cast<double>(data.size());
    ev.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return ev;
}

double batch_loss_and_gradient(const ReuploadModel &model, std::span<const double> params,
                               const std::vector<Sample> &data, std::span<const std::size_t> batch,
                               std::vector<double> &grad) {
    grad.assign(params.size(), 0.0);
    std::vector<double> g;
    double loss = 0;
    for (std::size_t idx : batch) {
        const auto &s = data.at(idx);
        loss += model.loss_and_gradient(params, s.x, s.y, g);
        for (std::size_t k = 0; k < g.size(); k++) {
            grad[k] += g[k];
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double &v : grad) {
        v *= inv;
    }
    return loss * inv;
}

namespace {

double finite_difference_error(const ReuploadModel &model, std::span<const double> params,
                               const std::vector<Sample> &data, std::span<const std::size_t> batch,
                               std::span<const double> grad) {
    constexpr double h = 1e-5;
    std::vector<double> shifted(params.begin(), params.end()), scratch;
    double num = 0, den = 0;
    for (std::size_t k = 0; k < params.size(); k++) {
        shifted[k] = params[k] + h;
        const double fp = batch_loss_and_gradient(model, shifted, data, batch, scratch);
        shifted[k] = params[k] - h;
        const double fm = batch_loss_and_gradient(model, shifted, data, batch, scratch);
        shifted[k] = params[k];
        const double fd = (fp - fm) / (2 * h);
        num = std::max(num, std::abs(fd - grad[k]));
        den = std::max(den, std::abs(grad[k]));
    }
    return den > 0 ? num / den : num;
}

/// Distinct step indices in [1, total] chosen from the seed.
std::vector<std::size_t> checkpoint_steps(std::size_t count, std::size_t total, std::uint64_t seed) {
    std::vector<std::size_t> steps(total);
    std::iota(steps.begin(), steps.end(), std::size_t{1});
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = steps.size(); i > 1; i--) {
        std::swap(steps[i - 1], steps[static_cast<std::size_t>(rng() % i)]);
    }
    steps.resize(std::min(count, total));
    std::sort(steps.begin(), steps.end());
    return steps;
}

MetricsRow metrics_row(const ReuploadModel &model, std::span<const double> params, std::size_t index,
                       const std::vector<Sample> &train_set, const std::vector<Sample> &test_set) {
    const Evaluation tr = evaluate(model, params, train_set);
    const Evaluation te = evaluate(model, params, test_set);
    check_finite(tr.loss, index, "train loss");
    return {index, tr.loss, tr.accuracy, te.loss, te.accuracy};
}

MetricsSeries train_adam(const ReuploadModel &model, const std::vector<Sample> &train_set,
                         const std::vector<Sample> &test_set, const TrainConfig &config) {
    MetricsSeries series;
    std::vector<double> params = initial_parameters(model.param_count(), config);
    series.initial_params = params;
    Adam adam(params.size(), {config.learning_rate});
    std::mt19937_64 rng(config.seed + 1);
    const std::size_t total = config.epochs * config.steps_per_epoch;
    const auto checks = checkpoint_steps(config.gradient_checks, total, config.seed);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> batch(config.batch_size);
    std::vector<double> grad;
    std::size_t cursor = 0, step = 0;
    for (std::size_t epoch = 1; epoch <= config.epochs; epoch++) {
        for (std::size_t i = order.size(); i > 1; i--) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
        }
        cursor = 0;
        for (std::size_t s = 0; s < config.steps_per_epoch; s++) {
            step++;
            for (auto &b : batch) {
                b = order[cursor % order.size()];
                cursor++;
            }
            const double loss = batch_loss_and_gradient(model, params, train_set, batch, grad);
            check_finite(loss, step, "training loss");
            if (std::binary_search(checks.begin(), checks.end(), step)) {
                series.gradient_check_errors.push_back(
                    finite_difference_error(model, params, train_set, batch, grad));
            }
            adam.step(params, grad);
        }
        series.rows.push_back(metrics_row(model, params, epoch, train_set, test_set));
    }
    series.final_params = params;
    return series;
}

MetricsSeries train_lbfgs(const ReuploadModel &model, const std::vector<Sample> &train_set,
                          const std::vector<Sample> &test_set, const TrainConfig &config) {
    MetricsSeries series;
    std::vector<double> params = initial_parameters(model.param_count(), config);
    series.initial_params = params;
    std::vector<std::size_t> all(train_set.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto checks = checkpoint_steps(config.gradient_checks, config.epochs, config.seed);

    Objective objective = [&](std::span<const double> x, std::vector<double> &g) {
        return batch_loss_and_gradient(model, x, train_set, all, g);
    };
    LbfgsConfig lc;
    lc.max_iterations = config.epochs;
    IterationCallback cb = [&](std::size_t it, std::span<const double> x, double) {
        if (std::binary_search(checks.begin(), checks.end(), it)) {
            std::vector<double> g;
            batch_loss_and_gradient(model, x, train_set, all, g);
            series.gradient_check_errors.push_back(finite_difference_error(model, x, train_set, all, g));
        }
        series.rows.push_back(metrics_row(model, x, it, train_set, test_set));
        return true;
    };
    const LbfgsResult res = lbfgs_minimize(objective, params, lc, cb);
    series.final_params = res.x;
    return series;
}

}  // namespace

MetricsSeries train(const ReuploadModel &model, const std::vector<Sample> &train_set,
                    const std::vector<Sample> &test_set, const TrainConfig &config) {
    config.validate();
    if (train_set.empty()) {
        throw std::invalid_argument("train: empty training set");
    }
    if (config.optimizer == OptimizerKind::Adam) {
        return train_adam(model, train_set, test_set, config);
    }
    return train_lbfgs(model, train_set, test_set, config);
}

}  // namespace symmqvar
