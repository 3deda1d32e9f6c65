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

#include "symmqvar/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "symmqvar/symmetry.hpp"

namespace symmqvar {

namespace {

constexpr std::array<std::array<int, 2>, kBoardCells> kCoords = {
    {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}, {1, 1}}};

// N, E, S, W as (row, col) steps.
constexpr std::array<std::array<int, 2>, 4> kSteps = {{{-1, 0}, {0, 1}, {1, 0}, {0, -1}}};

int cell_at(int r, int c) {
    if (r < 0 || r > 2 || c < 0 || c > 2) {
        return -1;
    }
    for (std::size_t i = 0; i < kBoardCells; i++) {
        if (kCoords[i][0] == r && kCoords[i][1] == c) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

/// Neighbour of `cell` in direction d, or -1 off the grid.
int neighbour(std::size_t cell, int d) {
    return cell_at(kCoords[cell][0] + kSteps[d][0], kCoords[cell][1] + kSteps[d][1]);
}

int direction_between(std::size_t from, std::size_t to) {
    for (int d = 0; d < 4; d++) {
        if (neighbour(from, d) == static_cast<int>(to)) {
            return d;
        }
    }
    return -1;
}

std::vector<int> road_neighbour_dirs(const RoadLayout &layout, std::size_t cell) {
    std::vector<int> out;
    for (int d = 0; d < 4; d++) {
        int nb = neighbour(cell, d);
        if (nb >= 0 && layout[static_cast<std::size_t>(nb)]) {
            out.push_back(d);
        }
    }
    return out;
}

/// A road cell connects in direction d if the neighbour there is road, or if the
/// cell is a road end (one road neighbour) whose road runs straight off the grid.
bool connects(const RoadLayout &layout, std::size_t cell, int d) {
    int nb = neighbour(cell, d);
    if (nb >= 0) {
        return layout[static_cast<std::size_t>(nb)];
    }
    auto dirs = road_neighbour_dirs(layout, cell);
    return dirs.size() == 1 && dirs[0] == (d + 2) % 4;
}

RoadLayout layout_from(std::initializer_list<std::size_t> cells) {
    RoadLayout out{};
    for (std::size_t c : cells) {
        out[c] = true;
    }
    return out;
}

void validate_layout(const RoadLayout &layout) {
    for (std::size_t c = 0; c < kBoardCells; c++) {
        if (!layout[c]) {
            continue;
        }
        auto dirs = road_neighbour_dirs(layout, c);
        if (dirs.empty()) {
            throw std::invalid_argument("Road layout has an isolated road cell");
        }
        if (dirs.size() == 1 && neighbour(c, (dirs[0] + 2) % 4) >= 0) {
            throw std::invalid_argument("Road layout has a dead end inside the grid");
        }
    }
}

}  // namespace

const char *ttt_class_name(TttClass c) {
    switch (c) {
        case TttClass::Circle:
            return "circle";
        case TttClass::Draw:
            return "draw";
        case TttClass::Cross:
            return "cross";
    }
    return "?";
}

std::array<double, 3> TttGame::one_hot() const {
    std::array<double, 3> y = {-1, -1, -1};
    y[static_cast<std::size_t>(label)] = 1;
    return y;
}

std::vector<double> TttGame::features() const {
    return {board.begin(), board.end()};
}

const std::array<std::array<std::size_t, 3>, 8> &ttt_lines() {
    static const std::array<std::array<std::size_t, 3>, 8> lines = {{
        {0, 1, 2},
        {7, 8, 3},
        {6, 5, 4},
        {0, 7, 6},
        {1, 8, 5},
        {2, 3, 4},
        {0, 8, 4},
        {2, 8, 6},
    }};
    return lines;
}

namespace {

bool has_line(const Board &b, int player) {
    for (const auto &line : ttt_lines()) {
        if (b[line[0]] == player && b[line[1]] == player && b[line[2]] == player) {
            return true;
        }
    }
    return false;
}

}  // namespace

TttClass label_board(const Board &board) {
    const bool cross = has_line(board, 1);
    const bool circle = has_line(board, -1);
    if (cross && circle) {
        throw std::invalid_argument("label_board: both players have a completed line");
    }
    if (cross) {
        return TttClass::Cross;
    }
    if (circle) {
        return TttClass::Circle;
    }
    return TttClass::Draw;
}

std::vector<TttGame> enumerate_ttt() {
    std::set<Board> seen;
    std::vector<std::pair<Board, int>> stack = {{Board{}, 1}};
    while (!stack.empty()) {
        auto [board, player] = stack.back();
        stack.pop_back();
        if (!seen.insert(board).second) {
            continue;
        }
        if (label_board(board) != TttClass::Draw) {
            continue;
        }
        for (std::size_t c = 0; c < kBoardCells; c++) {
            if (board[c] == 0) {
                Board next = board;
                next[c] = player;
                stack.emplace_back(next, -player);
            }
        }
    }
    std::vector<TttGame> out;
    out.reserve(seen.size());
    for (const auto &b : seen) {
        out.push_back({b, label_board(b)});
    }
    return out;
}

Board permute_board(const Board &board, const std::vector<std::size_t> &perm) {
    Board out{};
    for (std::size_t q = 0; q < kBoardCells; q++) {
        out[perm[q]] = board[q];
    }
    return out;
}

std::vector<double> DrivingScenario::features() const {
    return {grid.begin(), grid.end()};
}

std::size_t DrivingScenario::difficulty_index() const {
    return nearest_difficulty_index(difficulty);
}

std::vector<RoadLayout> driving_seed_layouts() {
    return {
        layout_from({1, 8, 5}),           // straight through the center
        layout_from({0, 7, 6}),           // straight along a side
        layout_from({1, 8, 3}),           // curve at the center
        layout_from({0, 7, 6, 5, 4}),     // curve at a corner
        layout_from({0, 7, 8, 3}),        // curve at a side cell
        layout_from({1, 8, 5, 3}),        // T at the center
        layout_from({0, 7, 6, 8, 3}),     // T at a side cell
        layout_from({1, 8, 3, 7, 6}),     // T at the center with a bent arm
        layout_from({1, 3, 5, 7, 8}),     // X-crossing
    };
}

std::vector<RoadLayout> driving_layouts() {
    SymmetryRep d4 = make_d4_rep();
    std::set<RoadLayout> all;
    for (const auto &seed : driving_seed_layouts()) {
        validate_layout(seed);
        for (const auto &g : d4.elements) {
            const auto &perm = g.clifford_form().perm;
            RoadLayout img{};
            for (std::size_t q = 0; q < kBoardCells; q++) {
                img[perm[q]] = seed[q];
            }
            all.insert(img);
        }
    }
    return {all.begin(), all.end()};
}

double driving_difficulty(const RoadLayout &layout, std::size_t car, std::size_t facing) {
    if (car >= kBoardCells || facing >= kBoardCells || !layout[car] || !layout[facing]) {
        throw std::invalid_argument("driving_difficulty: car and facing cell must be road");
    }
    const int heading = direction_between(car, facing);
    if (heading < 0) {
        throw std::invalid_argument("driving_difficulty: facing cell is not adjacent to the car");
    }
    const bool fwd = connects(layout, facing, heading);
    const bool right = connects(layout, facing, (heading + 1) % 4);
    const bool left = connects(layout, facing, (heading + 3) % 4);
    if (fwd && left && right) {
        return 1.0;
    }
    if (left && right) {
        return 0.8;
    }
    if (fwd && left) {
        return 0.6;
    }
    if (fwd && right) {
        return 0.4;
    }
    if (left || right) {
        return 0.2;
    }
    if (fwd) {
        return 0.0;
    }
    throw std::invalid_argument("driving_difficulty: dead end ahead of the car");
}

std::vector<DrivingScenario> enumerate_driving() {
    std::vector<DrivingScenario> out;
    for (const auto &layout : driving_layouts()) {
        for (std::size_t car = 0; car < kBoardCells; car++) {
            if (!layout[car]) {
                continue;
            }
            for (int d : road_neighbour_dirs(layout, car)) {
                DrivingScenario s;
                s.layout = layout;
                s.car = car;
                s.facing = static_cast<std::size_t>(neighbour(car, d));
                s.difficulty = driving_difficulty(layout, car, s.facing);
                for (std::size_t c = 0; c < kBoardCells; c++) {
                    s.grid[c] = layout[c] ? kRoad : kBlocked;
                }
                s.grid[car] = kCar;
                s.grid[s.facing] = kFacing;
                out.push_back(s);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const DrivingScenario &a, const DrivingScenario &b) { return a.grid < b.grid; });
    return out;
}

DecodedScenario decode_driving(const std::array<double, kBoardCells> &grid) {
    DecodedScenario out;
    int cars = 0, facings = 0;
    for (std::size_t c = 0; c < kBoardCells; c++) {
        const double v = grid[c];
        if (std::abs(v - kRoad) < 1e-12) {
            out.layout[c] = true;
        } else if (std::abs(v - kBlocked) < 1e-12) {
            out.layout[c] = false;
        } else if (std::abs(v - kCar) < 1e-12) {
            out.layout[c] = true;
            out.car = c;
            cars++;
        } else if (std::abs(v - kFacing) < 1e-12) {
            out.layout[c] = true;
            out.facing = c;
            facings++;
        } else {
            throw std::invalid_argument("decode_driving: unknown cell value");
        }
    }
    if (cars != 1 || facings != 1 || direction_between(out.car, out.facing) < 0) {
        throw std::invalid_argument("decode_driving: grid needs one car with an adjacent facing cell");
    }
    return out;
}

std::size_t nearest_difficulty_index(double y) {
    std::size_t best = 0;
    double best_dist = std::abs(y - kDifficulties[0]);
    for (std::size_t i = 1; i < kDifficulties.size(); i++) {
        const double d = std::abs(y - kDifficulties[i]);
        // Strict comparison keeps ties on the smaller difficulty.
        if (d < best_dist - 1e-12) {
            best = i;
            best_dist = d;
        }
    }
    return best;
}

namespace {

std::size_t bounded(std::mt19937_64 &rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

void shuffle(std::vector<std::size_t> &v, std::mt19937_64 &rng) {
    for (std::size_t i = v.size(); i > 1; i--) {
        std::swap(v[i - 1], v[bounded(rng, i)]);
    }
}

std::vector<std::size_t> quotas(std::size_t total, std::size_t k) {
    std::vector<std::size_t> q(k, total / k);
    for (std::size_t i = 0; i < total % k; i++) {
        q[i]++;
    }
    return q;
}

}  // namespace

Split balanced_split(const std::vector<std::size_t> &class_of, std::size_t num_classes, const SplitSpec &spec) {
    if (num_classes == 0) {
        throw std::invalid_argument("balanced_split: no classes");
    }
    std::mt19937_64 rng(spec.seed);
    std::vector<std::vector<std::size_t>> pools(num_classes);
    for (std::size_t i = 0; i < class_of.size(); i++) {
        if (class_of[i] >= num_classes) {
            throw std::invalid_argument("balanced_split: class index out of range");
        }
        pools[class_of[i]].push_back(i);
    }
    for (auto &p : pools) {
        shuffle(p, rng);
    }
    Split split;
    std::vector<std::size_t> used(num_classes, 0);
    const auto train_q = quotas(spec.train_size, num_classes);
    for (std::size_t c = 0; c < num_classes; c++) {
        const auto &pool = pools[c];
        const std::size_t take = std::min(train_q[c], pool.size());
        if (take < train_q[c]) {
            if (!spec.allow_duplicates || pool.empty()) {
                throw std::invalid_argument("balanced_split: class " + std::to_string(c) + " has only " +
                                            std::to_string(pool.size()) + " items for a train quota of " +
                                            std::to_string(train_q[c]));
            }
        }
        for (std::size_t i = 0; i < take; i++) {
            split.train.push_back(pool[i]);
        }
        for (std::size_t i = take; i < train_q[c]; i++) {
            split.train.push_back(pool[bounded(rng, take)]);
        }
        used[c] = take;
    }

    std::vector<std::size_t> test_q = quotas(spec.test_size, num_classes);
    std::vector<std::size_t> avail(num_classes);
    std::size_t total_avail = 0;
    for (std::size_t c = 0; c < num_classes; c++) {
        avail[c] = pools[c].size() - used[c];
        total_avail += avail[c];
    }
    if (total_avail < spec.test_size) {
        throw std::invalid_argument("balanced_split: only " + std::to_string(total_avail) +
                                    " unused items for a test set of " + std::to_string(spec.test_size));
    }
    std::size_t shortfall = 0;
    for (std::size_t c = 0; c < num_classes; c++) {
        if (test_q[c] > avail[c]) {
            shortfall += test_q[c] - avail[c];
            test_q[c] = avail[c];
        }
    }
    while (shortfall > 0) {
        for (std::size_t c = 0; c < num_classes && shortfall > 0; c++) {
            if (test_q[c] < avail[c]) {
                test_q[c]++;
                shortfall--;
            }
        }
    }
    for (std::size_t c = 0; c < num_classes; c++) {
        for (std::size_t i = 0; i < test_q[c]; i++) {
            split.test.push_back(pools[c][used[c] + i]);
        }
    }
    shuffle(split.train, rng);
    shuffle(split.test, rng);
    return split;
}

std::vector<std::size_t> ttt_classes(const std::vector<TttGame> &games) {
    std::vector<std::size_t> out;
    out.reserve(games.size());
    for (const auto &g : games) {
        out.push_back(static_cast<std::size_t>(g.label));
    }
    return out;
}

std::vector<std::size_t> driving_classes(const std::vector<DrivingScenario> &scenarios) {
    std::vector<std::size_t> out;
    out.reserve(scenarios.size());
    for (const auto &s : scenarios) {
        out.push_back(s.difficulty_index());
    }
    return out;
}

}  // namespace symmqvar
