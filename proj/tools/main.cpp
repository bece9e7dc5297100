// Copyright 2026 The bosonbench Authors
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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bosonbench/error.hpp"
#include "experiment.hpp"

namespace {

namespace bx = bosonbench::experiment;

enum ExitCode { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

int exit_code(bosonbench::ErrorKind kind) {
    switch (kind) {
        case bosonbench::ErrorKind::Config:
            return kUsage;
        case bosonbench::ErrorKind::Io:
            return kIo;
        default:
            return kNumerical;
    }
}

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool paper_scale = false;
    std::optional<unsigned> workers;
    std::optional<std::string> noise_axis;
    bool quiet = false;
};

bx::ExperimentConfig load(bx::Command command, const Flags &flags) {
    bx::ExperimentConfig cfg = flags.paper_scale ? bx::paper_preset(command) : bx::desk_preset(command);
    if (!flags.config.empty()) {
        std::ifstream in(flags.config, std::ios::binary);
        if (!in) {
            throw bosonbench::Error(bosonbench::ErrorKind::Io, "cannot read config " + flags.config);
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception &e) {
            throw bosonbench::Error(bosonbench::ErrorKind::Config,
                                    "config " + flags.config + " is not valid JSON: " + e.what());
        }
        bx::apply_json(cfg, j);
    }
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.out) cfg.output_dir = *flags.out;
    if (flags.workers) cfg.workers = *flags.workers;
    if (flags.noise_axis) cfg.noise_axis = bx::parse_axis(*flags.noise_axis);
    return cfg;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Boson sampling noise benchmarks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(BOSONBENCH_VERSION));

    Flags flags;
    for (const char *name : {"scatter", "coefficients", "scaling", "cloud", "distributions"}) {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "Master seed");
        sub->add_option("--out", flags.out, "Output directory");
        sub->add_flag("--paper-scale", flags.paper_scale, "Start from figure-scale parameters");
        sub->add_option("--workers", flags.workers, "Worker threads (0: all CPUs)");
        sub->add_option("--noise-axis", flags.noise_axis, "xind or pnoise")
            ->check(CLI::IsMember({"xind", "pnoise"}));
        sub->add_flag("-q,--quiet", flags.quiet, "No progress on stderr");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const bx::Command command = bx::parse_command(app.get_subcommands().front()->get_name());
        const bx::ExperimentConfig cfg = load(command, flags);
        const bx::RunResult result = bx::run(command, cfg, flags.quiet);
        std::cout << result.summary.dump(2) << '\n';
        std::cout.flush();
        if (!std::cout) {
            std::cerr << "bosonbench: failed writing to standard output\n";
            return kIo;
        }
        return kOk;
    } catch (const bosonbench::Error &e) {
        std::cerr << "bosonbench: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::bad_alloc &) {
        std::cerr << "bosonbench: out of memory\n";
        return kNumerical;
    } catch (const std::exception &e) {
        std::cerr << "bosonbench: " << e.what() << '\n';
        return kNumerical;
    }
}
