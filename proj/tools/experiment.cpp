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

#include "experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "bosonbench/distributions.hpp"
#include "bosonbench/error.hpp"
#include "bosonbench/format.hpp"
#include "bosonbench/linalg.hpp"
#include "bosonbench/parallel.hpp"
#include "bosonbench/sampler.hpp"
#include "bosonbench/stats.hpp"

#ifndef BOSONBENCH_VERSION
#define BOSONBENCH_VERSION "0.0.0"
#endif

namespace bosonbench::experiment {

namespace {

using ordered_json = nlohmann::ordered_json;

// Substream tags; grid coordinates are appended after the tag.
enum : std::uint64_t {
    kMatrixStream = 1,
    kReferenceStream = 2,
    kTestStream = 3,
    kCloudStream = 4,
    kSelectionStream = 5,
};

std::uint64_t bits(double v) {
    return std::bit_cast<std::uint64_t>(v);
}

Seed matrix_seed(const ExperimentConfig &c, std::size_t m, std::size_t index) {
    return derive_seed(c.seed, {kMatrixStream, m, index});
}

Seed reference_seed(const ExperimentConfig &c, int n, std::size_t m, std::size_t index) {
    return derive_seed(c.seed, {kReferenceStream, static_cast<std::uint64_t>(n), m, index});
}

Seed test_seed(const ExperimentConfig &c, double value, int n, std::size_t m, std::size_t index) {
    return derive_seed(c.seed, {kTestStream, static_cast<std::uint64_t>(c.noise_axis), bits(value),
                                static_cast<std::uint64_t>(n), m, index});
}

OccupationPattern first_modes_input(std::size_t m, int n) {
    OccupationPattern input(m);
    for (int i = 0; i < n; ++i) {
        input[static_cast<std::size_t>(i)] = 1;
    }
    return input;
}

NoiseConfig noise_for(NoiseAxis axis, double value) {
    return axis == NoiseAxis::Xind ? NoiseConfig::distinguishability(value) : NoiseConfig::coupled(value);
}

SampleSet test_samples(const ComplexMatrix &m, const OccupationPattern &input, NoiseAxis axis, double value,
                       std::size_t samples, Seed seed, unsigned workers) {
    if (axis == NoiseAxis::Xind) {
        return sample_partial_dist(m, input, value, samples, seed, workers);
    }
    PostSelectionOptions options;
    options.workers = workers;
    return sample_noisy_postselected(m, input, NoiseConfig::coupled(value), samples, seed, options);
}

// Either a sampled noiseless run or the exact ideal distribution.
struct ReferenceData {
    std::optional<SampleSet> samples;
    std::optional<ExactDistribution> exact;

    PatternSource source() const {
        return exact ? PatternSource(*exact) : PatternSource(*samples);
    }
};

ReferenceData make_reference(const ExperimentConfig &c, const ComplexMatrix &m, const OccupationPattern &input,
                             std::size_t index, unsigned workers) {
    ReferenceData ref;
    if (c.reference == Reference::Exact) {
        ref.exact = ideal_distribution(m, input);
    } else {
        ref.samples = sample_ideal(m, input, c.samples, reference_seed(c, input.total(), m.rows(), index), workers);
    }
    return ref;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class Output {
   public:
    Output(const ExperimentConfig &config, Command command)
        : config_(config), command_(command), hash_(config_hash(config, command)) {
        std::error_code ec;
        std::filesystem::create_directories(config.output_dir, ec);
        if (ec) {
            throw Error(ErrorKind::Io, "cannot create output directory " + config.output_dir.string() + ": " +
                                           ec.message());
        }
    }

    /// Writes header comments followed by `body`.
    void write(const std::string &name, const std::string &body) {
        const auto path = config_.output_dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
        }
        out << "# bosonbench " << BOSONBENCH_VERSION << '\n'
            << "# command: " << to_string(command_) << '\n'
            << "# config_hash: " << hash_ << '\n'
            << "# seed: " << config_.seed << '\n'
            << body;
        out.flush();
        if (!out) {
            throw Error(ErrorKind::Io, "failed writing " + path.string());
        }
        files_.push_back(path);
    }

    RunResult finish(ordered_json details) {
        RunResult result;
        result.files = files_;
        ordered_json summary;
        summary["command"] = to_string(command_);
        summary["config_hash"] = hash_;
        summary["seed"] = config_.seed;
        auto &names = summary["files"] = ordered_json::array();
        for (const auto &f : files_) {
            names.push_back(f.filename().string());
        }
        summary["results"] = std::move(details);
        result.summary = std::move(summary);
        return result;
    }

   private:
    const ExperimentConfig &config_;
    Command command_;
    std::string hash_;
    std::vector<std::filesystem::path> files_;
};

void progress(bool quiet, Command c, const std::string &message) {
    if (!quiet) {
        std::cerr << '[' << to_string(c) << "] " << message << '\n';
    }
}

ordered_json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

int max_order(const std::vector<int> &orders) {
    return *std::max_element(orders.begin(), orders.end());
}

template <typename T>
std::vector<T> get_list(const nlohmann::json &j, const char *key) {
    if (!j.is_array()) {
        throw Error(ErrorKind::Config, std::string("'") + key + "' must be an array");
    }
    return j.get<std::vector<T>>();
}

void check_grid(const std::vector<double> &grid, const char *name, bool upper_open) {
    for (double v : grid) {
        const bool ok = upper_open ? (v >= 0.0 && v < 1.0) : (v >= 0.0 && v <= 1.0);
        if (!ok) {
            throw Error(ErrorKind::Config, std::string(name) + " value " + format_double(v) + " is out of range");
        }
    }
}

std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> v;
    for (int i = 0; i < points; ++i) {
        // Rounded to 1e-12 so grid values print as short decimals.
        const double raw = lo + (hi - lo) * i / (points - 1);
        v.push_back(std::round(raw * 1e12) / 1e12);
    }
    return v;
}

}  // namespace

Command parse_command(std::string_view name) {
    if (name == "scatter") return Command::Scatter;
    if (name == "coefficients") return Command::Coefficients;
    if (name == "scaling") return Command::Scaling;
    if (name == "cloud") return Command::Cloud;
    if (name == "distributions") return Command::Distributions;
    throw Error(ErrorKind::Config, "unknown subcommand '" + std::string(name) + "'");
}

std::string_view to_string(Command c) {
    switch (c) {
        case Command::Scatter:
            return "scatter";
        case Command::Coefficients:
            return "coefficients";
        case Command::Scaling:
            return "scaling";
        case Command::Cloud:
            return "cloud";
        case Command::Distributions:
            return "distributions";
    }
    return "unknown";
}

NoiseAxis parse_axis(std::string_view name) {
    if (name == "xind") return NoiseAxis::Xind;
    if (name == "pnoise") return NoiseAxis::Pnoise;
    throw Error(ErrorKind::Config, "noise axis must be 'xind' or 'pnoise', got '" + std::string(name) + "'");
}

std::string_view to_string(NoiseAxis a) {
    return a == NoiseAxis::Xind ? "xind" : "pnoise";
}

ExperimentConfig desk_preset(Command c) {
    ExperimentConfig cfg;
    cfg.x_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    cfg.pnoise_grid = {0.0, 0.1, 0.2, 0.3};
    cfg.orders = {2, 3};
    cfg.samples = 10'000;
    switch (c) {
        case Command::Scatter:
            cfg.x_grid = {0.0, 0.5, 1.0};
            cfg.orders = {2, 3, 4};
            break;
        case Command::Coefficients:
            break;
        case Command::Scaling:
            cfg.m = 15;
            cfg.n_values = {4, 5, 6};
            cfg.matrices = 5;
            cfg.samples = 5'000;
            cfg.x_grid = {0.0, 0.5, 1.0};
            cfg.orders = {3};
            break;
        case Command::Cloud:
            cfg.m = 12;
            cfg.n = 3;
            cfg.samples = 2'000;
            cfg.combo_budget = 100;
            cfg.x_grid = {0.0, 0.5, 1.0};
            break;
        case Command::Distributions:
            cfg.m = 8;
            cfg.n = 4;
            cfg.samples = 10'000;
            cfg.pnoise_grid = {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
            cfg.x_grid = {1.0, 0.95, 0.9, 0.8, 0.6};
            break;
    }
    return cfg;
}

ExperimentConfig paper_preset(Command c) {
    ExperimentConfig cfg = desk_preset(c);
    switch (c) {
        case Command::Scatter:
            cfg.m = 15;
            cfg.n = 10;
            cfg.samples = 10'000;
            cfg.orders = {2, 3, 4};
            cfg.x_grid = linspace(0.0, 1.0, 6);
            break;
        case Command::Coefficients:
            cfg.m = 15;
            cfg.n = 10;
            cfg.samples = 10'000;
            cfg.orders = {2, 3, 4};
            cfg.x_grid = linspace(0.0, 1.0, 11);
            cfg.pnoise_grid = linspace(0.0, 0.5, 11);
            break;
        case Command::Scaling:
            cfg.m = 15;
            cfg.n_values = {4, 5, 6, 7, 8, 9, 10};
            cfg.matrices = 100;
            cfg.samples = 10'000;
            cfg.orders = {3};
            cfg.x_grid = linspace(0.0, 1.0, 11);
            break;
        case Command::Cloud:
            cfg.m = 16;
            cfg.n = 4;
            cfg.samples = 10'000;
            cfg.combo_budget = 0;
            cfg.x_grid = linspace(0.0, 1.0, 6);
            cfg.pnoise_grid = linspace(0.0, 0.5, 6);
            break;
        case Command::Distributions:
            cfg.m = 10;
            cfg.n = 5;
            cfg.samples = 1'000'000;
            cfg.pnoise_grid = linspace(0.0, 0.5, 11);
            cfg.x_grid = linspace(1.0, 0.5, 11);
            break;
    }
    return cfg;
}

void apply_json(ExperimentConfig &cfg, const nlohmann::json &j) {
    if (!j.is_object()) {
        throw Error(ErrorKind::Config, "config must be a JSON object");
    }
    try {
        for (const auto &[key, value] : j.items()) {
            if (key == "m") {
                cfg.m = value.get<std::size_t>();
            } else if (key == "n") {
                cfg.n = value.get<int>();
            } else if (key == "x_grid") {
                cfg.x_grid = get_list<double>(value, "x_grid");
            } else if (key == "pnoise_grid") {
                cfg.pnoise_grid = get_list<double>(value, "pnoise_grid");
            } else if (key == "orders") {
                cfg.orders = get_list<int>(value, "orders");
            } else if (key == "samples") {
                cfg.samples = value.get<std::size_t>();
            } else if (key == "matrices") {
                cfg.matrices = value.get<std::size_t>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "output_dir") {
                cfg.output_dir = value.get<std::string>();
            } else if (key == "combo_budget") {
                cfg.combo_budget = value.get<std::size_t>();
            } else if (key == "n_values") {
                cfg.n_values = get_list<int>(value, "n_values");
            } else if (key == "m_values") {
                cfg.m_values = get_list<std::size_t>(value, "m_values");
            } else if (key == "noise_axis") {
                cfg.noise_axis = parse_axis(value.get<std::string>());
            } else if (key == "reference") {
                const auto r = value.get<std::string>();
                if (r == "sampled") {
                    cfg.reference = Reference::Sampled;
                } else if (r == "exact") {
                    cfg.reference = Reference::Exact;
                } else {
                    throw Error(ErrorKind::Config, "reference must be 'sampled' or 'exact'");
                }
            } else if (key == "workers") {
                cfg.workers = value.get<unsigned>();
            } else {
                throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Config, std::string("bad config value: ") + e.what());
    }
}

void validate(const ExperimentConfig &c, Command command) {
    auto fail = [](const std::string &msg) { throw Error(ErrorKind::Config, msg); };
    if (c.m < 1) fail("m must be at least 1");
    if (c.n < 1 || static_cast<std::size_t>(c.n) > c.m) fail("n must lie in [1, m]");
    if (c.n > kMaxSamplerPhotons) fail("n above the sampler limit of " + std::to_string(kMaxSamplerPhotons));
    if (c.samples < 1) fail("samples must be at least 1");
    if (c.matrices < 1) fail("matrices must be at least 1");
    check_grid(c.x_grid, "x_grid", false);
    check_grid(c.pnoise_grid, "pnoise_grid", true);
    if (command != Command::Distributions) {
        if (c.orders.empty()) fail("orders must not be empty");
        for (int t : c.orders) {
            if (t < 1 || t > kMaxCorrelatorOrder) fail("order " + std::to_string(t) + " is out of range");
        }
        if (c.noise_grid().empty()) fail(std::string(to_string(c.noise_axis)) + " grid is empty");
    } else if (c.pnoise_grid.empty()) {
        fail("pnoise grid is empty");
    }
    if (command == Command::Scaling) {
        for (int n : c.n_values) {
            if (n < 1 || static_cast<std::size_t>(n) > c.m || n > kMaxSamplerPhotons) {
                fail("n_values entry " + std::to_string(n) + " is out of range");
            }
        }
        for (std::size_t m : c.m_values) {
            if (m < static_cast<std::size_t>(c.n)) fail("m_values entry " + std::to_string(m) + " is below n");
        }
    }
    if (command == Command::Cloud && c.combo_budget != 0 && c.combo_budget < 30) {
        fail("combo_budget must be 0 (all) or at least 30");
    }
    if (command == Command::Distributions) {
        if (pattern_count(c.m, c.n) > kDefaultEnumerationCap) {
            fail(std::to_string(pattern_count(c.m, c.n)) + " output patterns exceed the enumeration cap; use smaller m or n");
        }
        if (!c.x_grid.empty() && c.n > kMaxPermutationSumPhotons) {
            fail("the x_ind inset needs n <= " + std::to_string(kMaxPermutationSumPhotons));
        }
    }
}

nlohmann::ordered_json canonical_json(const ExperimentConfig &c, Command command) {
    ordered_json j;
    j["command"] = to_string(command);
    j["m"] = c.m;
    j["n"] = c.n;
    j["x_grid"] = c.x_grid;
    j["pnoise_grid"] = c.pnoise_grid;
    j["orders"] = c.orders;
    j["samples"] = c.samples;
    j["matrices"] = c.matrices;
    j["seed"] = c.seed;
    j["combo_budget"] = c.combo_budget;
    j["n_values"] = c.n_values;
    j["m_values"] = c.m_values;
    j["noise_axis"] = to_string(c.noise_axis);
    j["reference"] = c.reference == Reference::Exact ? "exact" : "sampled";
    return j;
}

std::string config_hash(const ExperimentConfig &c, Command command) {
    const std::string text = canonical_json(c, command).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return hex64(h);
}

double fit_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorKind::DegenerateInput, "slope fit needs two or more paired points");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw Error(ErrorKind::DegenerateInput, "slope fit needs non-constant x");
    }
    return sxy / sxx;
}

RunResult cmd_scatter(const ExperimentConfig &c, bool quiet) {
    validate(c, Command::Scatter);
    Output out(c, Command::Scatter);
    const ComplexMatrix m = haar_unitary(c.m, matrix_seed(c, c.m, 0));
    const OccupationPattern input = first_modes_input(c.m, c.n);
    const ReferenceData ref = make_reference(c, m, input, 0, c.workers);
    const MomentTable ref_table(ref.source(), max_order(c.orders));

    ordered_json rows = ordered_json::array();
    for (double value : c.noise_grid()) {
        const SampleSet test =
            test_samples(m, input, c.noise_axis, value, c.samples, test_seed(c, value, c.n, c.m, 0), c.workers);
        const MomentTable test_table(test, max_order(c.orders));
        for (int t : c.orders) {
            const CorrelatorSet test_set = all_correlators(test_table, t);
            const CorrelatorSet comp_set = all_correlators(ref_table, t);
            std::ostringstream body;
            write_scatter_csv(body, test_set, comp_set);
            out.write("scatter_" + std::string(to_string(c.noise_axis)) + "_" + format_double(value) + "_t" +
                          std::to_string(t) + ".csv",
                      body.str());
            double slope = std::numeric_limits<double>::quiet_NaN();
            try {
                slope = fit_slope(comp_set.values, test_set.values);
            } catch (const Error &) {
            }
            ordered_json row;
            row["noise_value"] = value;
            row["order"] = t;
            row["correlators"] = test_set.size();
            row["slope"] = json_number(slope);
            rows.push_back(std::move(row));
        }
        progress(quiet, Command::Scatter, std::string(to_string(c.noise_axis)) + "=" + format_double(value));
    }
    return out.finish(std::move(rows));
}

RunResult cmd_coefficients(const ExperimentConfig &c, bool quiet) {
    validate(c, Command::Coefficients);
    Output out(c, Command::Coefficients);
    const ComplexMatrix m = haar_unitary(c.m, matrix_seed(c, c.m, 0));
    const OccupationPattern input = first_modes_input(c.m, c.n);
    const ReferenceData ref = make_reference(c, m, input, 0, c.workers);

    std::ostringstream body;
    body << "noise_value,order,pearson,spearman,gamma,test_sum,comp_sum,flag\n";
    ordered_json rows = ordered_json::array();
    for (double value : c.noise_grid()) {
        const SampleSet test =
            test_samples(m, input, c.noise_axis, value, c.samples, test_seed(c, value, c.n, c.m, 0), c.workers);
        const EvaluationReport report = evaluate(test, ref.source(), c.orders);
        for (const auto &r : report.orders) {
            const int flag = (r.gamma_flagged ? 1 : 0) | (r.coefficients_flagged ? 2 : 0);
            body << format_double(value) << ',' << r.order << ',' << format_double(r.pearson) << ','
                 << format_double(r.spearman) << ',' << format_double(r.gamma) << ',' << format_double(r.test_sum)
                 << ',' << format_double(r.comp_sum) << ',' << flag << '\n';
            ordered_json row;
            row["noise_value"] = value;
            row["order"] = r.order;
            row["pearson"] = json_number(r.pearson);
            row["spearman"] = json_number(r.spearman);
            row["gamma"] = json_number(r.gamma);
            row["flag"] = flag;
            rows.push_back(std::move(row));
        }
        progress(quiet, Command::Coefficients, std::string(to_string(c.noise_axis)) + "=" + format_double(value));
    }
    out.write("coefficients_" + std::string(to_string(c.noise_axis)) + ".csv", body.str());
    return out.finish(std::move(rows));
}

RunResult cmd_scaling(const ExperimentConfig &c, bool quiet) {
    validate(c, Command::Scaling);
    Output out(c, Command::Scaling);

    std::vector<std::pair<int, std::size_t>> points;
    if (!c.n_values.empty()) {
        for (int n : c.n_values) points.emplace_back(n, c.m);
    } else if (!c.m_values.empty()) {
        for (std::size_t m : c.m_values) points.emplace_back(c.n, m);
    } else {
        points.emplace_back(c.n, c.m);
    }
    const auto &grid = c.noise_grid();

    std::ostringstream body;
    body << "n,m,noise_value,order,gamma_mean,gamma_std,count,flagged\n";
    ordered_json rows = ordered_json::array();
    for (const auto &[n, modes] : points) {
        // gammas[matrix][grid index][order index]; NaN marks a flagged denominator.
        std::vector<std::vector<std::vector<double>>> gammas(
            c.matrices, std::vector<std::vector<double>>(grid.size(), std::vector<double>(c.orders.size())));
        parallel_for(c.matrices, c.workers, [&](std::size_t idx) {
            const ComplexMatrix m = haar_unitary(modes, matrix_seed(c, modes, idx));
            const OccupationPattern input = first_modes_input(modes, n);
            const ReferenceData ref = make_reference(c, m, input, idx, 1);
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const SampleSet test =
                    test_samples(m, input, c.noise_axis, grid[g], c.samples, test_seed(c, grid[g], n, modes, idx), 1);
                const EvaluationReport report = evaluate(test, ref.source(), c.orders);
                for (std::size_t o = 0; o < c.orders.size(); ++o) {
                    gammas[idx][g][o] = report.orders[o].gamma;
                }
            }
        });
        for (std::size_t g = 0; g < grid.size(); ++g) {
            for (std::size_t o = 0; o < c.orders.size(); ++o) {
                double sum = 0.0;
                std::size_t count = 0;
                std::size_t flagged = 0;
                for (std::size_t idx = 0; idx < c.matrices; ++idx) {
                    const double v = gammas[idx][g][o];
                    if (std::isnan(v)) {
                        ++flagged;
                    } else {
                        sum += v;
                        ++count;
                    }
                }
                const double mean = count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
                double ss = 0.0;
                for (std::size_t idx = 0; idx < c.matrices; ++idx) {
                    const double v = gammas[idx][g][o];
                    if (!std::isnan(v)) ss += (v - mean) * (v - mean);
                }
                const double sd =
                    count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : std::numeric_limits<double>::quiet_NaN();
                body << n << ',' << modes << ',' << format_double(grid[g]) << ',' << c.orders[o] << ','
                     << format_double(mean) << ',' << format_double(sd) << ',' << count << ',' << flagged << '\n';
                ordered_json row;
                row["n"] = n;
                row["m"] = modes;
                row["noise_value"] = grid[g];
                row["order"] = c.orders[o];
                row["gamma_mean"] = json_number(mean);
                row["gamma_std"] = json_number(sd);
                rows.push_back(std::move(row));
            }
        }
        progress(quiet, Command::Scaling, "n=" + std::to_string(n) + " m=" + std::to_string(modes));
    }
    out.write("scaling_" + std::string(to_string(c.noise_axis)) + ".csv", body.str());
    return out.finish(std::move(rows));
}

RunResult cmd_cloud(const ExperimentConfig &c, bool quiet) {
    validate(c, Command::Cloud);
    Output out(c, Command::Cloud);
    const ComplexMatrix m = haar_unitary(c.m, matrix_seed(c, c.m, 0));
    const std::string axis(to_string(c.noise_axis));

    CloudOptions options;
    options.samples_per_combo = c.samples;
    options.combo_budget = c.combo_budget;
    options.selection_seed = derive_seed(c.seed, {kSelectionStream});
    options.workers = c.workers;

    std::ostringstream summary;
    summary << "noise_value,order,mean_cv,mean_cs,stderr_cv,stderr_cs,points,degenerate\n";
    ordered_json rows = ordered_json::array();
    for (double value : c.noise_grid()) {
        const Seed seed = derive_seed(c.seed, {kCloudStream, static_cast<std::uint64_t>(c.noise_axis), bits(value)});
        const auto clouds = cloud(m, c.n, c.orders, noise_for(c.noise_axis, value), options, seed);
        for (int t : c.orders) {
            const auto &points = clouds.at(t);
            std::ostringstream body;
            write_csv(body, points);
            out.write("cloud_" + axis + "_" + format_double(value) + "_t" + std::to_string(t) + ".csv", body.str());
            const CloudSummary s = summarize(points);
            summary << format_double(value) << ',' << t << ',' << format_double(s.mean_cv) << ','
                    << format_double(s.mean_cs) << ',' << format_double(s.stderr_cv) << ','
                    << format_double(s.stderr_cs) << ',' << s.points << ',' << s.degenerate << '\n';
            ordered_json row;
            row["noise_value"] = value;
            row["order"] = t;
            row["mean_cv"] = json_number(s.mean_cv);
            row["mean_cs"] = json_number(s.mean_cs);
            row["stderr_cv"] = json_number(s.stderr_cv);
            row["stderr_cs"] = json_number(s.stderr_cs);
            row["points"] = s.points;
            row["degenerate"] = s.degenerate;
            rows.push_back(std::move(row));
        }
        progress(quiet, Command::Cloud, axis + "=" + format_double(value));
    }
    out.write("cloud_summary_" + axis + ".csv", summary.str());
    return out.finish(std::move(rows));
}

RunResult cmd_distributions(const ExperimentConfig &c, bool quiet) {
    validate(c, Command::Distributions);
    Output out(c, Command::Distributions);
    const ComplexMatrix m = haar_unitary(c.m, matrix_seed(c, c.m, 0));
    const OccupationPattern input = first_modes_input(c.m, c.n);

    const ExactDistribution ideal = ideal_distribution(m, input);
    const ExactDistribution background = sorted_background(ideal);
    {
        std::ostringstream body;
        body << "rank,pattern,prob\n";
        for (std::size_t i = 0; i < background.patterns.size(); ++i) {
            body << i + 1 << ',' << background.patterns[i].to_string() << ',' << format_double(background.probs[i])
                 << '\n';
        }
        out.write("distributions_background.csv", body.str());
    }

    auto lookup = [](const ExactDistribution &d) {
        std::map<OccupationPattern, double> map;
        for (std::size_t i = 0; i < d.patterns.size(); ++i) {
            map[d.patterns[i]] = d.probs[i];
        }
        return map;
    };

    ordered_json pnoise_rows = ordered_json::array();
    std::ostringstream tvd_body;
    tvd_body << "p_noise,D_exact,D_empirical,acceptance_rate\n";
    for (double p : c.pnoise_grid) {
        const ExactDistribution exact = noisy_postselected_distribution(m, input, 1.0 - p, p);
        PostSelectionOptions options;
        options.workers = c.workers;
        const SampleSet samples = sample_noisy_postselected(
            m, input, NoiseConfig::coupled(p), c.samples, derive_seed(c.seed, {kTestStream, 1, bits(p)}), options);
        const ExactDistribution empirical = empirical_distribution(samples.patterns);
        const auto exact_map = lookup(exact);
        const auto emp_map = lookup(empirical);

        std::ostringstream body;
        body << "rank,pattern,prob_ideal,prob_exact,prob_empirical\n";
        for (std::size_t i = 0; i < background.patterns.size(); ++i) {
            const auto &t = background.patterns[i];
            auto e = exact_map.find(t);
            auto s = emp_map.find(t);
            body << i + 1 << ',' << t.to_string() << ',' << format_double(background.probs[i]) << ','
                 << format_double(e == exact_map.end() ? 0.0 : e->second) << ','
                 << format_double(s == emp_map.end() ? 0.0 : s->second) << '\n';
        }
        out.write("distributions_pnoise_" + format_double(p) + ".csv", body.str());

        const double d_exact = tvd(exact, ideal);
        const double d_emp = tvd(empirical, ideal);
        tvd_body << format_double(p) << ',' << format_double(d_exact) << ',' << format_double(d_emp) << ','
                 << format_double(samples.acceptance_rate) << '\n';
        ordered_json row;
        row["p_noise"] = p;
        row["D_exact"] = d_exact;
        row["D_empirical"] = d_emp;
        row["acceptance_rate"] = samples.acceptance_rate;
        pnoise_rows.push_back(std::move(row));
        progress(quiet, Command::Distributions, "p_noise=" + format_double(p));
    }
    out.write("distributions_tvd_pnoise.csv", tvd_body.str());

    ordered_json xind_rows = ordered_json::array();
    if (!c.x_grid.empty()) {
        std::ostringstream body;
        body << "x_ind,D_exact,D_empirical\n";
        for (double x : c.x_grid) {
            const ExactDistribution exact = partial_dist_distribution(m, input, x);
            const SampleSet samples =
                sample_partial_dist(m, input, x, c.samples, derive_seed(c.seed, {kTestStream, 0, bits(x)}), c.workers);
            const double d_exact = tvd(exact, ideal);
            const double d_emp = tvd(empirical_distribution(samples.patterns), ideal);
            body << format_double(x) << ',' << format_double(d_exact) << ',' << format_double(d_emp) << '\n';
            ordered_json row;
            row["x_ind"] = x;
            row["D_exact"] = d_exact;
            row["D_empirical"] = d_emp;
            xind_rows.push_back(std::move(row));
            progress(quiet, Command::Distributions, "x_ind=" + format_double(x));
        }
        out.write("distributions_tvd_xind.csv", body.str());
    }

    ordered_json details;
    details["patterns"] = ideal.patterns.size();
    details["pnoise"] = std::move(pnoise_rows);
    details["xind"] = std::move(xind_rows);
    return out.finish(std::move(details));
}

RunResult run(Command c, const ExperimentConfig &config, bool quiet) {
    switch (c) {
        case Command::Scatter:
            return cmd_scatter(config, quiet);
        case Command::Coefficients:
            return cmd_coefficients(config, quiet);
        case Command::Scaling:
            return cmd_scaling(config, quiet);
        case Command::Cloud:
            return cmd_cloud(config, quiet);
        case Command::Distributions:
            return cmd_distributions(config, quiet);
    }
    throw Error(ErrorKind::Config, "unknown subcommand");
}

}  // namespace bosonbench::experiment
