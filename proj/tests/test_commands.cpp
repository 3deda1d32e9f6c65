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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "symmqvar/commands.hpp"
#include "symmqvar/io.hpp"

namespace symmqvar {
namespace {

namespace fs = std::filesystem;

class CommandTest : public ::testing::Test {
   protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("symmqvar_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunOptions options(const std::string &sub, std::size_t threads = 1) {
        RunOptions o;
        o.out_dir = dir_ / sub;
        o.threads = threads;
        o.log = &log_;
        return o;
    }

    fs::path write_config(const std::string &name, const json &j) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << j.dump();
        return p;
    }

    static std::vector<std::string> lines(const fs::path &p) {
        std::ifstream in(p);
        std::vector<std::string> out;
        for (std::string line; std::getline(in, line);) {
            out.push_back(line);
        }
        return out;
    }

    static std::string slurp(const fs::path &p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::ostringstream log_;
};

TEST_F(CommandTest, TwirlExchangeGateset) {
    const json cfg = {{"rep", "exchange"}, {"num_qubits", 2}, {"gateset", "standard"}};
    const auto o = options("twirl");
    cmd_twirl(cfg, o);
    const json g = read_json_file(o.out_dir / "gateset.json");
    ASSERT_EQ(g["generators"].size(), 4u);
    EXPECT_EQ(pauli_sum_from_json(g["generators"][3]["operator"], 2), PauliSum(2, {{"ZZ", 1.0}}));
    EXPECT_EQ(pauli_sum_from_json(g["generators"][0]["operator"], 2), PauliSum(2, {{"XI", 0.5}, {"IX", 0.5}}));
    EXPECT_TRUE(fs::exists(o.out_dir / "manifest.json"));
}

TEST_F(CommandTest, TwirlTrivialGroupEchoesInput) {
    const json cfg = {{"rep", "trivial"}, {"num_qubits", 2}, {"gateset", {"X0", "0.5 Z0 Z1"}}};
    const auto o = options("twirl");
    cmd_twirl(cfg, o);
    const json g = read_json_file(o.out_dir / "gateset.json");
    ASSERT_EQ(g["generators"].size(), 2u);
    EXPECT_EQ(pauli_sum_from_json(g["generators"][1]["operator"], 2), PauliSum(2, {{"ZZ", 0.5}}));
}

TEST_F(CommandTest, TwirlWarnsWhenEverythingVanishes) {
    const json cfg = {{"rep", "parity"}, {"num_qubits", 1}, {"gateset", {"Y0", "Z0"}}};
    cmd_twirl(cfg, options("twirl"));
    EXPECT_NE(log_.str().find("warning: all generators trivialized"), std::string::npos) << log_.str();
}

TEST_F(CommandTest, TwirlHaar) {
    const json cfg = {{"rep", "haar_local"}, {"num_qubits", 2}, {"gateset", {"X0 X1", "Y0"}}};
    const auto o = options("twirl");
    cmd_twirl(cfg, o);
    const json g = read_json_file(o.out_dir / "gateset.json");
    ASSERT_EQ(g["generators"].size(), 1u);
    EXPECT_LT(pauli_sum_from_json(g["generators"][0]["operator"], 2)
                  .max_coeff_diff(PauliSum(2, {{"XX", 1.0 / 3}, {"YY", 1.0 / 3}, {"ZZ", 1.0 / 3}})),
              1e-15);
}

TEST_F(CommandTest, TrainSmokeMetrics) {
    const json cfg = json::parse(R"({"task": "ttt", "grid": [[1, 1]], "seeds": [0], "epochs": 2,
                                     "train_size": 30, "test_size": 30, "gradient_checks": 3})");
    const auto o = options("train");
    const json manifest = cmd_train(cfg, o);
    const auto rows = lines(o.out_dir / "metrics" / "ttt_l1_p1_tcemoid_invariant_s0.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "run_id,seed,epoch,train_loss,train_acc,test_loss,test_acc");
    EXPECT_EQ(lines(o.out_dir / "final.csv").size(), 3u);  // header, invariant, free
    EXPECT_EQ(lines(o.out_dir / "deltas.csv").size(), 2u);
    ASSERT_EQ(manifest["runs"].size(), 2u);
    for (const auto &run : manifest["runs"]) {
        ASSERT_EQ(run["gradient_check_errors"].size(), 3u);
        for (double e : run["gradient_check_errors"]) {
            EXPECT_LT(e, 1e-6);
        }
    }
    EXPECT_EQ(read_json_file(o.out_dir / "manifest.json"), manifest);
}

TEST_F(CommandTest, TrainDrivingSteps) {
    const json cfg = json::parse(R"({"task": "driving", "grid": [[1, 1]], "seeds": [1], "steps": 2,
                                     "variants": ["invariant"]})");
    const auto o = options("train");
    cmd_train(cfg, o);
    const auto rows = lines(o.out_dir / "metrics" / "driving_l1_p1_tcemoid_invariant_s1.csv");
    ASSERT_GE(rows.size(), 2u);
    EXPECT_LE(rows.size(), 3u);
    EXPECT_NE(rows[0].find(",step,"), std::string::npos);
}

TEST_F(CommandTest, VqeSmokeRespectsBound) {
    const json cfg = {{"families", {"qaoa"}}, {"n", {4}}, {"p", {1, 2}}, {"seeds", {0, 1, 2}}};
    const auto o = options("vqe");
    cmd_vqe(cfg, o);
    const auto rows = lines(o.out_dir / "vqe.csv");
    ASSERT_EQ(rows.size(), 7u);
    for (std::size_t i = 1; i < rows.size(); i++) {
        std::stringstream ss(rows[i]);
        std::vector<std::string> cells;
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        ASSERT_EQ(cells.size(), 8u);
        EXPECT_GE(std::stod(cells[4]), std::stod(cells[5]) - 1e-8);
    }
}

TEST_F(CommandTest, VqeDeterministicAcrossThreadCounts) {
    const json cfg = {{"families", {"qaoa", "qaoa_prime"}}, {"n", {4}}, {"p", {1, 2}}, {"seeds", {0, 1, 2}}};
    const auto a = options("one", 1), b = options("three", 3);
    cmd_vqe(cfg, a);
    cmd_vqe(cfg, b);
    EXPECT_EQ(slurp(a.out_dir / "vqe.csv"), slurp(b.out_dir / "vqe.csv"));
}

TEST_F(CommandTest, BarrenRows) {
    const json cfg = {{"families", {"qaoa"}}, {"n", {4, 6}}, {"p", 4}, {"samples", 50}, {"seed", 0}};
    const auto o = options("barren");
    const json manifest = cmd_barren(cfg, o);
    const auto rows = lines(o.out_dir / "barren.csv");
    EXPECT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "family,N,variance,stderr");
    const auto two = options("two", 2);
    cmd_barren(cfg, two);
    EXPECT_EQ(slurp(o.out_dir / "barren.csv"), slurp(two.out_dir / "barren.csv"));
}

TEST_F(CommandTest, DatasetExport) {
    const auto o = options("ttt");
    cmd_dataset({{"dataset", "ttt"}}, o);
    const auto rows = lines(o.out_dir / "dataset.csv");
    EXPECT_EQ(rows.size(), 5479u);
    EXPECT_EQ(rows[0], "f0,f1,f2,f3,f4,f5,f6,f7,f8,label");
    const auto d = options("driving");
    cmd_dataset({{"dataset", "driving"}, {"split", {{"train_size", 60}, {"test_size", 130}, {"seed", 0},
                                                   {"allow_duplicates", true}}}},
                d);
    EXPECT_EQ(lines(d.out_dir / "dataset.csv").size(), 249u);
    const json split = read_json_file(d.out_dir / "split.json");
    EXPECT_EQ(split["train"].size(), 60u);
    EXPECT_EQ(split["test"].size(), 130u);
}

TEST_F(CommandTest, SmokeBlockIsMergedAndRemoved) {
    const json cfg = {{"epochs", 100}, {"seeds", {0, 1, 2}}, {"smoke", {{"epochs", 2}}}};
    const json plain = effective_config(cfg, false);
    EXPECT_EQ(plain["epochs"], 100);
    EXPECT_FALSE(plain.contains("smoke"));
    const json smoke = effective_config(cfg, true);
    EXPECT_EQ(smoke["epochs"], 2);
    EXPECT_EQ(smoke["seeds"].size(), 3u);
    EXPECT_FALSE(smoke.contains("smoke"));
}

TEST_F(CommandTest, ConfigErrorsExitWithOne) {
    const auto o = options("bad");
    EXPECT_EQ(run_command("dataset", write_config("a.json", {{"dataset", "ttt"}, {"colour", "blue"}}), o), kExitConfig);
    EXPECT_EQ(run_command("dataset", dir_ / "missing.json", o), kExitConfig);
    EXPECT_EQ(run_command("vqe", write_config("b.json", {{"families", {"qaoa"}}, {"n", "four"}}), o), kExitConfig);
    EXPECT_EQ(run_command("twirl", write_config("c.json", {{"rep", "octahedral"}, {"num_qubits", 2}}), o),
              kExitConfig);
    EXPECT_EQ(run_command("train", write_config("d.json", {{"task", "ttt"}, {"layouts", {"xyz"}}}), o), kExitConfig);
    EXPECT_EQ(run_command("launch", write_config("e.json", json::object()), o), kExitConfig);
    std::ofstream(dir_ / "broken.json") << "{\"dataset\": ";
    EXPECT_EQ(run_command("dataset", dir_ / "broken.json", o), kExitConfig);
}

TEST_F(CommandTest, RunCommandSucceeds) {
    EXPECT_EQ(run_command("dataset", write_config("ok.json", {{"dataset", "driving"}}), options("ok")), kExitOk);
}

TEST(Threads, FlagThenEnvironment) {
    ::unsetenv("SYMMQVAR_THREADS");
    EXPECT_EQ(resolve_threads(std::nullopt), 1u);
    EXPECT_EQ(resolve_threads(4), 4u);
    ::setenv("SYMMQVAR_THREADS", "3", 1);
    EXPECT_EQ(resolve_threads(std::nullopt), 3u);
    EXPECT_EQ(resolve_threads(2), 2u);
    ::setenv("SYMMQVAR_THREADS", "lots", 1);
    EXPECT_THROW(resolve_threads(std::nullopt), ConfigError);
    ::unsetenv("SYMMQVAR_THREADS");
    EXPECT_THROW(resolve_threads(0), ConfigError);
}

}  // namespace
}  // namespace symmqvar
