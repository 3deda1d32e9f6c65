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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "symmqvar/datasets.hpp"
#include "symmqvar/symmetry.hpp"
#include "ttt_oracle.hpp"

namespace symmqvar {
namespace {

int signed_label(TttClass c) { return static_cast<int>(c) - 1; }

TEST(Ttt, MatchesBruteForce) {
    const auto games = enumerate_ttt();
    const auto oracle = testing::brute_force_games();
    ASSERT_EQ(games.size(), oracle.size());
    EXPECT_EQ(games.size(), 5478u);
    for (const auto &g : games) {
        const auto it = oracle.find(g.board);
        ASSERT_NE(it, oracle.end());
        EXPECT_EQ(signed_label(g.label), it->second);
    }
}

TEST(Ttt, SortedAndUnique) {
    const auto games = enumerate_ttt();
    for (std::size_t i = 1; i < games.size(); i++) {
        EXPECT_LT(games[i - 1].board, games[i].board);
    }
}

TEST(Ttt, ClassCounts) {
    std::map<TttClass, int> counts;
    for (const auto &g : enumerate_ttt()) {
        counts[g.label]++;
    }
    EXPECT_EQ(counts[TttClass::Circle], 316);
    EXPECT_EQ(counts[TttClass::Draw], 4536);
    EXPECT_EQ(counts[TttClass::Cross], 626);
}

TEST(Ttt, ClosedUnderD4WithLabels) {
    const auto games = enumerate_ttt();
    std::map<Board, TttClass> index;
    for (const auto &g : games) {
        index[g.board] = g.label;
    }
    for (const auto &e : make_d4_rep().elements) {
        for (const auto &g : games) {
            const auto it = index.find(permute_board(g.board, e.clifford_form().perm));
            ASSERT_NE(it, index.end());
            EXPECT_EQ(it->second, g.label);
        }
    }
}

TEST(Ttt, LabelExamples) {
    EXPECT_EQ(label_board(Board{}), TttClass::Draw);
    // Top row crosses, two circles elsewhere.
    EXPECT_EQ(label_board(Board{1, 1, 1, 0, -1, -1, 0, 0, 0}), TttClass::Cross);
    // Main diagonal (0, 8, 4) circles.
    EXPECT_EQ(label_board(Board{-1, 1, 0, 1, -1, 0, 1, 0, -1}), TttClass::Circle);
    EXPECT_THROW(label_board(Board{1, 1, 1, 0, -1, -1, -1, 0, 0}), std::invalid_argument);  // top and bottom rows
    // Full board without a line, rows X O X / X O O / O X X.
    EXPECT_EQ(label_board(Board{1, -1, 1, -1, 1, 1, -1, 1, -1}), TttClass::Draw);
}

TEST(Ttt, OneHot) {
    TttGame g;
    g.label = TttClass::Cross;
    EXPECT_EQ(g.one_hot(), (std::array<double, 3>{-1, -1, 1}));
    EXPECT_STREQ(ttt_class_name(TttClass::Circle), "circle");
}

std::array<double, kBoardCells> permute_grid(const std::array<double, kBoardCells> &g,
                                             const std::vector<std::size_t> &perm) {
    std::array<double, kBoardCells> out{};
    for (std::size_t q = 0; q < kBoardCells; q++) {
        out[perm[q]] = g[q];
    }
    return out;
}

TEST(Driving, Counts) {
    const auto all = enumerate_driving();
    EXPECT_EQ(driving_layouts().size(), 39u);
    EXPECT_EQ(all.size(), 248u);
    std::array<int, 6> hist{};
    for (const auto &s : all) {
        hist[s.difficulty_index()]++;
    }
    EXPECT_EQ(hist, (std::array<int, 6>{148, 48, 16, 16, 16, 4}));
}

TEST(Driving, FourCrossingScenarios) {
    int n = 0;
    for (const auto &s : enumerate_driving()) {
        if (s.difficulty == 1.0) {
            n++;
            EXPECT_EQ(s.facing, 8u);  // entering the crossing
        }
    }
    EXPECT_EQ(n, 4);
}

TEST(Driving, Z4ClosurePreservesDifficulty) {
    const auto all = enumerate_driving();
    std::map<std::array<double, kBoardCells>, double> index;
    for (const auto &s : all) {
        index[s.grid] = s.difficulty;
    }
    for (const auto &e : make_z4_rep().elements) {
        for (const auto &s : all) {
            const auto it = index.find(permute_grid(s.grid, e.clifford_form().perm));
            ASSERT_NE(it, index.end());
            EXPECT_EQ(it->second, s.difficulty);
        }
    }
}

TEST(Driving, ReflectionSwapsLeftAndRight) {
    // The grid set is closed under D4, but a mirror turns forward+left into forward+right.
    const auto all = enumerate_driving();
    std::map<std::array<double, kBoardCells>, double> index;
    for (const auto &s : all) {
        index[s.grid] = s.difficulty;
    }
    const auto flip = board_flip();
    bool swapped = false;
    for (const auto &s : all) {
        const auto it = index.find(permute_grid(s.grid, flip));
        ASSERT_NE(it, index.end());
        if (s.difficulty == 0.4) {
            EXPECT_EQ(it->second, 0.6);
            swapped = true;
        }
    }
    EXPECT_TRUE(swapped);
}

TEST(Driving, EncodingInvariants) {
    for (const auto &s : enumerate_driving()) {
        EXPECT_EQ(std::count(s.grid.begin(), s.grid.end(), kCar), 1);
        EXPECT_EQ(std::count(s.grid.begin(), s.grid.end(), kFacing), 1);
        EXPECT_EQ(s.grid[s.car], kCar);
        EXPECT_EQ(s.grid[s.facing], kFacing);
        for (std::size_t q = 0; q < kBoardCells; q++) {
            EXPECT_EQ(s.layout[q], s.grid[q] != kBlocked);
        }
    }
}

TEST(Driving, DecodeRoundTrip) {
    for (const auto &s : enumerate_driving()) {
        const auto d = decode_driving(s.grid);
        EXPECT_EQ(d.layout, s.layout);
        EXPECT_EQ(d.car, s.car);
        EXPECT_EQ(d.facing, s.facing);
    }
    std::array<double, kBoardCells> bad{};
    bad.fill(kRoad);
    EXPECT_THROW(decode_driving(bad), std::invalid_argument);
    bad[0] = 0.5;
    EXPECT_THROW(decode_driving(bad), std::invalid_argument);
}

TEST(Driving, DifficultyExamples) {
    RoadLayout straight{};  // column T, center, B
    straight[1] = straight[8] = straight[5] = true;
    EXPECT_EQ(driving_difficulty(straight, 1, 8), 0.0);
    RoadLayout cross{};
    for (std::size_t q : {1, 3, 5, 7, 8}) {
        cross[q] = true;
    }
    EXPECT_EQ(driving_difficulty(cross, 1, 8), 1.0);
    EXPECT_THROW(driving_difficulty(straight, 1, 3), std::invalid_argument);
    EXPECT_THROW(driving_difficulty(straight, 1, 5), std::invalid_argument);
}

TEST(Driving, NearestDifficulty) {
    EXPECT_EQ(nearest_difficulty_index(-0.3), 0u);
    EXPECT_EQ(nearest_difficulty_index(0.29), 1u);
    EXPECT_EQ(nearest_difficulty_index(0.3), 1u);  // ties go to the smaller level
    EXPECT_EQ(nearest_difficulty_index(1.7), 5u);
}

std::vector<std::size_t> class_hist(const std::vector<std::size_t> &idx, const std::vector<std::size_t> &cls,
                                    std::size_t k) {
    std::vector<std::size_t> h(k, 0);
    for (auto i : idx) {
        h[cls[i]]++;
    }
    return h;
}

TEST(Split, TttProtocolBalancedAndDisjoint) {
    const auto cls = ttt_classes(enumerate_ttt());
    const Split s = balanced_split(cls, 3, {450, 600, 7, false});
    EXPECT_EQ(s.train.size(), 450u);
    EXPECT_EQ(s.test.size(), 600u);
    EXPECT_EQ(class_hist(s.train, cls, 3), (std::vector<std::size_t>{150, 150, 150}));
    // Only 316 - 150 circle positions remain unused; the other 34 test slots go to the other classes.
    EXPECT_EQ(class_hist(s.test, cls, 3), (std::vector<std::size_t>{166, 217, 217}));
    std::set<std::size_t> train(s.train.begin(), s.train.end());
    EXPECT_EQ(train.size(), 450u);
    for (auto i : s.test) {
        EXPECT_FALSE(train.count(i));
    }
    EXPECT_EQ(std::set<std::size_t>(s.test.begin(), s.test.end()).size(), 600u);
}

TEST(Split, Deterministic) {
    const auto cls = ttt_classes(enumerate_ttt());
    const Split a = balanced_split(cls, 3, {30, 30, 3, false});
    const Split b = balanced_split(cls, 3, {30, 30, 3, false});
    const Split c = balanced_split(cls, 3, {30, 30, 4, false});
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    EXPECT_NE(a.train, c.train);
}

TEST(Split, DrivingProtocolWithCopies) {
    const auto cls = driving_classes(enumerate_driving());
    EXPECT_THROW(balanced_split(cls, 6, {60, 130, 0, false}), std::invalid_argument);
    const Split s = balanced_split(cls, 6, {60, 130, 0, true});
    EXPECT_EQ(class_hist(s.train, cls, 6), (std::vector<std::size_t>(6, 10)));
    EXPECT_EQ(s.test.size(), 130u);
    std::set<std::size_t> train(s.train.begin(), s.train.end());
    for (auto i : s.test) {
        EXPECT_FALSE(train.count(i));
    }
    EXPECT_EQ(std::set<std::size_t>(s.test.begin(), s.test.end()).size(), 130u);
}

TEST(Split, Errors) {
    EXPECT_THROW(balanced_split({0, 1}, 0, {1, 1, 0, false}), std::invalid_argument);
    EXPECT_THROW(balanced_split({0, 5}, 2, {1, 1, 0, false}), std::invalid_argument);
    EXPECT_THROW(balanced_split({0, 1}, 2, {2, 2, 0, false}), std::invalid_argument);
}

}  // namespace
}  // namespace symmqvar
