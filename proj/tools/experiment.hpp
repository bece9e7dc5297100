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

#ifndef BOSONBENCH_TOOLS_EXPERIMENT_HPP
#define BOSONBENCH_TOOLS_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bosonbench/random.hpp"

namespace bosonbench::experiment {

enum class Command { Scatter, Coefficients, Scaling, Cloud, Distributions };
enum class NoiseAxis { Xind, Pnoise };
enum class Reference { Sampled, Exact };

Command parse_command(std::string_view name);
std::string_view to_string(Command c);
NoiseAxis parse_axis(std::string_view name);
std::string_view to_string(NoiseAxis a);

struct ExperimentConfig {
    std::size_t m = 10;
    int n = 5;
    std::vector<double> x_grid;
    std::vector<double> pnoise_grid;
    std::vector<int> orders;
    std::size_t samples = 10'000;
    std::size_t matrices = 1;
    Seed seed = 1;
    std::filesystem::path output_dir = "out";
    std::size_t combo_budget = 100;
    std::vector<int> n_values;
    std::vector<std::size_t> m_values;
    NoiseAxis noise_axis = NoiseAxis::Xind;
    Reference reference = Reference::Sampled;
    unsigned workers = 0;  // 0: logical CPUs

    /// Grid for the active noise axis.
    const std::vector<double> &noise_grid() const {
        return noise_axis == NoiseAxis::Xind ? x_grid : pnoise_grid;
    }
};

/// Desk-scale defaults for a subcommand (n <= 6, samples <= 1e4).
ExperimentConfig desk_preset(Command c);
/// Full-scale parameters for a subcommand.
ExperimentConfig paper_preset(Command c);

/// Overlays the keys present in `j` onto `config`. Unknown keys are a config error.
void apply_json(ExperimentConfig &config, const nlohmann::json &j);

/// Throws Error(Config) when the config cannot drive command `c`.
void validate(const ExperimentConfig &config, Command c);

/// Effective configuration as JSON with stable key order. Worker count and
/// output directory are left out: they never change results.
nlohmann::ordered_json canonical_json(const ExperimentConfig &config, Command c);

/// FNV-1a 64 of the canonical JSON dump, 16 hex digits.
std::string config_hash(const ExperimentConfig &config, Command c);

struct RunResult {
    std::vector<std::filesystem::path> files;
    nlohmann::ordered_json summary;
};

/// Runs a subcommand, writing CSV files under config.output_dir. Progress
/// lines go to standard error unless `quiet`.
RunResult run(Command c, const ExperimentConfig &config, bool quiet = false);

RunResult cmd_scatter(const ExperimentConfig &config, bool quiet = false);
RunResult cmd_coefficients(const ExperimentConfig &config, bool quiet = false);
RunResult cmd_scaling(const ExperimentConfig &config, bool quiet = false);
RunResult cmd_cloud(const ExperimentConfig &config, bool quiet = false);
RunResult cmd_distributions(const ExperimentConfig &config, bool quiet = false);

/// Least-squares slope of y on x (with intercept).
double fit_slope(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace bosonbench::experiment

#endif
