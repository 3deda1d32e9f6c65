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

// symmqvar <twirl|train|vqe|barren|dataset> --config <path> --out <dir> [--threads k] [--smoke]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "symmqvar/commands.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Symmetry-aware variational quantum circuit experiments"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::optional<std::size_t> threads;
    bool smoke = false;

    for (const char *name : {"twirl", "train", "vqe", "barren", "dataset"}) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON experiment config")->required();
        sub->add_option("--out", out, "Output directory")->required();
        sub->add_option("--threads", threads, "Worker threads (default: SYMMQVAR_THREADS or 1)");
        sub->add_flag("--smoke", smoke, "Apply the config's smoke overrides");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? symmqvar::kExitOk : symmqvar::kExitConfig;
    }

    symmqvar::RunOptions options;
    options.out_dir = out;
    options.smoke = smoke;
    try {
        options.threads = symmqvar::resolve_threads(threads);
    } catch (const symmqvar::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return symmqvar::kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    return symmqvar::run_command(command, config, options);
}
