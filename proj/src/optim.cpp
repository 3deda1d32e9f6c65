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

#include "symmqvar/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace symmqvar {

Adam::Adam(std::size_t dim, AdamConfig config) : config_(config), m_(dim, 0.0), v_(dim, 0.0) {}

void Adam::step(std::vector<double> &params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw std::invalid_argument("Adam::step: dimension mismatch");
    }
    t_++;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); i++) {
        m_[i] = config_.beta1 * m_[i] + (1 - config_.beta1) * grad[i];
        v_[i] = config_.beta2 * v_[i] + (1 - config_.beta2) * grad[i] * grad[i];
        const double mhat = m_[i] / bc1;
        const double vhat = v_[i] / bc2;
        params[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
    }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Point {
    double alpha = 0;
    double f = 0;
    double df = 0;  // directional derivative
    std::vector<double> x;
    std::vector<double> g;
};

class LineSearch {
   public:
    LineSearch(const Objective &obj, const LbfgsConfig &cfg, std::size_t step, std::size_t &evals)
        : obj_(obj), cfg_(cfg), step_(step), evals_(evals) {}

    /// Returns true and fills `out` on success. `start` holds alpha = 0.
    bool search(const Point &start, std::span<const double> dir, double alpha0, Point &out) {
        start_ = &start;
        dir_ = dir;
        Point prev = start;
        double alpha = alpha0;
        for (std::size_t i = 0; i < cfg_.max_line_search; i++) {
            Point cur = eval(alpha);
            if (cur.f > start.f + cfg_.c1 * alpha * start.df || (i > 0 && cur.f >= prev.f)) {
                return zoom(prev, cur, out);
            }
            if (std::abs(cur.df) <= -cfg_.c2 * start.df) {
                out = std::move(cur);
                return true;
            }
            if (cur.df >= 0) {
                return zoom(cur, prev, out);
            }
            prev = std::move(cur);
            alpha *= 2;
        }
        return finish(prev, out);
    }

   private:
    Point eval(double alpha) {
        Point p;
        p.alpha = alpha;
        p.x.resize(start_->x.size());
        for (std::size_t i = 0; i < p.x.size(); i++) {
            p.x[i] = start_->x[i] + alpha * dir_[i];
        }
        p.f = obj_(p.x, p.g);
        evals_++;
        if (!std::isfinite(p.f)) {
            throw DivergenceError("objective is not finite during line search", step_);
        }
        p.df = dot(p.g, dir_);
        return p;
    }

    // Best point with sufficient decrease, used when the curvature condition
    // cannot be met within the budget.
    bool finish(const Point &lo, Point &out) const {
        if (lo.alpha > 0 && lo.f < start_->f) {
            out = lo;
            return true;
        }
        return false;
    }

    bool zoom(Point lo, Point hi, Point &out) {
        for (std::size_t i = 0; i < cfg_.max_line_search; i++) {
            const double width = std::abs(hi.alpha - lo.alpha);
            if (width <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) {
                break;
            }
            double alpha = cubic_min(lo, hi);
            const double a = std::min(lo.alpha, hi.alpha);
            const double b = std::max(lo.alpha, hi.alpha);
            if (!std::isfinite(alpha) || alpha < a + 0.1 * width || alpha > b - 0.1 * width) {
                alpha = 0.5 * (lo.alpha + hi.alpha);
            }
            Point cur = eval(alpha);
            if (cur.f > start_->f + cfg_.c1 * alpha * start_->df || cur.f >= lo.f) {
                hi = std::move(cur);
            } else {
                if (std::abs(cur.df) <= -cfg_.c2 * start_->df) {
                    out = std::move(cur);
                    return true;
                }
                if (cur.df * (hi.alpha - lo.alpha) >= 0) {
                    hi = lo;
                }
                lo = std::move(cur);
            }
        }
        return finish(lo, out);
    }

    static double cubic_min(const Point &p, const Point &q) {
        const double d1 = p.df + q.df - 3 * (p.f - q.f) / (p.alpha - q.alpha);
        const double rad = d1 * d1 - p.df * q.df;
        if (rad < 0) {
            return std::nan("");
        }
        const double sign = q.alpha > p.alpha ? 1.0 : -1.0;
        const double d2 = sign * std::sqrt(rad);
        return q.alpha - (q.alpha - p.alpha) * (q.df + d2 - d1) / (q.df - p.df + 2 * d2);
    }

    const Objective &obj_;
    const LbfgsConfig &cfg_;
    std::size_t step_;
    std::size_t &evals_;
    const Point *start_ = nullptr;
    std::span<const double> dir_;
};

}  // namespace

LbfgsResult lbfgs_minimize(const Objective &objective, std::vector<double> x0, const LbfgsConfig &config,
                           const IterationCallback &callback) {
    LbfgsResult result;
    Point cur;
    cur.x = std::move(x0);
    cur.f = objective(cur.x, cur.g);
    result.evaluations = 1;
    if (!std::isfinite(cur.f)) {
        throw DivergenceError("objective is not finite at the initial point", 0);
    }
    result.values.push_back(cur.f);

    const std::size_t dim = cur.x.size();
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> dir(dim), alpha_buf;

    auto done = [&](const char *reason, bool converged) {
        result.x = cur.x;
        result.value = cur.f;
        result.gradient_norm = norm(cur.g);
        result.converged = converged;
        result.stop_reason = reason;
        return result;
    };

    while (true) {
        if (norm(cur.g) < config.gradient_tolerance) {
            return done("gradient norm below tolerance", true);
        }
        if (result.iterations >= config.max_iterations) {
            return done("iteration limit", false);
        }

        // Two-loop recursion for dir = -H g.
        for (std::size_t i = 0; i < dim; i++) {
            dir[i] = -cur.g[i];
        }
        const std::size_t m = s_hist.size();
        alpha_buf.assign(m, 0.0);
        for (std::size_t k = m; k-- > 0;) {
            alpha_buf[k] = rho_hist[k] * dot(s_hist[k], dir);
            for (std::size_t i = 0; i < dim; i++) {
                dir[i] -= alpha_buf[k] * y_hist[k][i];
            }
        }
        if (m > 0) {
            const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
            for (double &d : dir) {
                d *= gamma;
            }
        }
        for (std::size_t k = 0; k < m; k++) {
            const double beta = rho_hist[k] * dot(y_hist[k], dir);
            for (std::size_t i = 0; i < dim; i++) {
                dir[i] += (alpha_buf[k] - beta) * s_hist[k][i];
            }
        }
        cur.df = dot(cur.g, dir);
        if (cur.df >= 0) {
            // Not a descent direction; restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (std::size_t i = 0; i < dim; i++) {
                dir[i] = -cur.g[i];
            }
            cur.df = dot(cur.g, dir);
        }
        const double alpha0 = m == 0 ? std::min(1.0, 1.0 / norm(cur.g)) : 1.0;

        Point next;
        LineSearch ls(objective, config, result.iterations + 1, result.evaluations);
        cur.alpha = 0;
        if (!ls.search(cur, dir, alpha0, next)) {
            if (m > 0) {
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
                continue;
            }
            return done("line search failed", false);
        }

        std::vector<double> s(dim), y(dim);
        for (std::size_t i = 0; i < dim; i++) {
            s[i] = next.x[i] - cur.x[i];
            y[i] = next.g[i] - cur.g[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * norm(s) * norm(y)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > config.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        cur = std::move(next);
        result.iterations++;
        result.values.push_back(cur.f);
        if (callback && !callback(result.iterations, cur.x, cur.f)) {
            return done("stopped by callback", norm(cur.g) < config.gradient_tolerance);
        }
    }
}

}  // namespace symmqvar
