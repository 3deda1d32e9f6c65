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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace symmqvar {

/// Raised when an objective turns non-finite. `step` is the optimizer step
/// (1-based) at which it happened, 0 for the initial evaluation.
class DivergenceError : public std::runtime_error {
   public:
    DivergenceError(const std::string &what, std::size_t step) : std::runtime_error(what), step_(step) {}
    std::size_t step() const { return step_; }

   private:
    std::size_t step_;
};

/// Value-and-gradient callback: returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::vector<double> &grad)>;

struct AdamConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
   public:
    Adam(std::size_t dim, AdamConfig config = {});

    /// One bias-corrected update of `params` in place.
    void step(std::vector<double> &params, std::span<const double> grad);
    std::size_t steps_taken() const { return t_; }

   private:
    AdamConfig config_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::size_t t_ = 0;
};

struct LbfgsConfig {
    std::size_t history = 10;
    std::size_t max_iterations = 5000;
    double gradient_tolerance = 1e-8;
    std::size_t max_line_search = 40;
    double c1 = 1e-4;  // sufficient decrease
    double c2 = 0.9;   // curvature
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0;
    double gradient_norm = 0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;  // gradient norm below tolerance
    std::string stop_reason;
    std::vector<double> values;  // f after each accepted iteration, values[0] is f(x0)
};

/// Called after each accepted iteration; returning false stops the run.
using IterationCallback = std::function<bool(std::size_t iteration, std::span<const double> x, double value)>;

/// Limited-memory BFGS with a strong-Wolfe line search. Accepted iterates never
/// increase the objective. Throws DivergenceError on a non-finite value.
LbfgsResult lbfgs_minimize(const Objective &objective, std::vector<double> x0, const LbfgsConfig &config = {},
                           const IterationCallback &callback = {});

}  // namespace symmqvar
