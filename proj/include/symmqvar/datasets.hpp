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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace symmqvar {

// Boards use ring order: 0 TL, 1 T, 2 TR, 3 R, 4 BR, 5 B, 6 BL, 7 L, 8 center.
inline constexpr std::size_t kBoardCells = 9;

using Board = std::array<int, kBoardCells>;

enum class TttClass : int { Circle = 0, Draw = 1, Cross = 2 };

const char *ttt_class_name(TttClass c);

struct TttGame {
    Board board{};  // +1 cross, -1 circle, 0 empty
    TttClass label = TttClass::Draw;

    /// (circle, draw, cross) with +1 on the label and -1 elsewhere.
    std::array<double, 3> one_hot() const;
    std::vector<double> features() const;
};

/// The eight winning lines in ring order.
const std::array<std::array<std::size_t, 3>, 8> &ttt_lines();

/// Cross or circle when that player owns a completed line, draw otherwise.
/// Throws std::invalid_argument when both players have lines.
TttClass label_board(const Board &board);

/// Every position reachable by alternating play (cross first) that stops at the
/// first completed line. Sorted lexicographically on the board vector.
std::vector<TttGame> enumerate_ttt();

/// Board permuted so that cell q moves to perm[q].
Board permute_board(const Board &board, const std::vector<std::size_t> &perm);

inline constexpr double kRoad = 1.0;
inline constexpr double kBlocked = -1.0;
inline constexpr double kCar = -1.0 / 3.0;
inline constexpr double kFacing = 1.0 / 3.0;

/// Difficulty levels: forward; curve; forward+right; forward+left; left+right; all three.
inline constexpr std::array<double, 6> kDifficulties = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

using RoadLayout = std::array<bool, kBoardCells>;

struct DrivingScenario {
    std::array<double, kBoardCells> grid{};
    double difficulty = 0;
    RoadLayout layout{};
    std::size_t car = 0;
    std::size_t facing = 0;  // cell directly in front of the car

    std::vector<double> features() const;
    std::size_t difficulty_index() const;
};

/// Hand-placed layouts the generator starts from.
std::vector<RoadLayout> driving_seed_layouts();
/// Seed layouts closed under the eight board symmetries, deduplicated and sorted.
std::vector<RoadLayout> driving_layouts();

/// Difficulty for a car on `car` facing the neighbouring road cell `facing`.
/// Throws std::invalid_argument for a dead end or an illegal pose.
double driving_difficulty(const RoadLayout &layout, std::size_t car, std::size_t facing);

/// Car on every road cell facing every adjacent road cell of every layout,
/// sorted lexicographically on the grid.
std::vector<DrivingScenario> enumerate_driving();

struct DecodedScenario {
    RoadLayout layout{};
    std::size_t car = 0;
    std::size_t facing = 0;
};

/// Inverse of the grid encoding. Throws on malformed grids.
DecodedScenario decode_driving(const std::array<double, kBoardCells> &grid);

std::size_t nearest_difficulty_index(double y);

struct SplitSpec {
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::uint64_t seed = 0;
    /// Fill a train class that runs out of unique items with random copies.
    bool allow_duplicates = false;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Class-balanced train/test selection over item indices.
///
/// Train classes get equal quotas (within one). Test items are unique and never
/// appear in train; when a class has too few unused items the shortfall is
/// spread over the remaining classes.
Split balanced_split(const std::vector<std::size_t> &class_of, std::size_t num_classes, const SplitSpec &spec);

std::vector<std::size_t> ttt_classes(const std::vector<TttGame> &games);
std::vector<std::size_t> driving_classes(const std::vector<DrivingScenario> &scenarios);

}  // namespace symmqvar
