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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "symmqvar/io.hpp"

namespace symmqvar {

/// Schema or value problem in an experiment config (exit code 1).
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDivergence = 2;

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::size_t threads = 1;
    bool smoke = false;
    std::ostream *log = nullptr;  // std::cout when null
};

/// Thread count from the flag, else SYMMQVAR_THREADS, else 1.
/// Throws ConfigError for zero or unparsable values.
std::size_t resolve_threads(std::optional<std::size_t> flag);

/// Applies the config's "smoke" block (a JSON merge patch) when smoke is set,
/// and removes the block itself.
json effective_config(const json &config, bool smoke);

// Each command validates the whole config before computing, writes its files to
// options.out_dir and returns the manifest it wrote. Errors: ConfigError for
// schema problems, DivergenceError for non-finite objectives.
json cmd_twirl(const json &config, const RunOptions &options);
json cmd_train(const json &config, const RunOptions &options);
json cmd_vqe(const json &config, const RunOptions &options);
json cmd_barren(const json &config, const RunOptions &options);
json cmd_dataset(const json &config, const RunOptions &options);

/// Reads the config file and dispatches; maps errors to exit codes and prints them.
int run_command(const std::string &command, const std::filesystem::path &config_path, const RunOptions &options);

}  // namespace symmqvar
