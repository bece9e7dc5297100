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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "bosonbench/error.hpp"
#include "experiment.hpp"

using namespace bosonbench;
using namespace bosonbench::experiment;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Io;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("bosonbench_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig tiny(Command c, const fs::path &dir) {
    ExperimentConfig cfg = desk_preset(c);
    cfg.m = 6;
    cfg.n = 3;
    cfg.samples = 400;
    cfg.x_grid = {0.0, 1.0};
    cfg.pnoise_grid = {0.0, 0.2};
    cfg.orders = {2, 3};
    cfg.output_dir = dir;
    cfg.matrices = 3;
    cfg.n_values = {2, 3};
    cfg.combo_budget = 0;
    cfg.workers = 1;
    return cfg;
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(BOSONBENCH_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config overlay and validation") {
    ExperimentConfig cfg = desk_preset(Command::Coefficients);
    apply_json(cfg, nlohmann::json::parse(R"({"m": 8, "n": 3, "x_grid": [0.5], "noise_axis": "pnoise",
                                             "reference": "exact", "seed": 99})"));
    CHECK(cfg.m == 8);
    CHECK(cfg.n == 3);
    CHECK(cfg.x_grid == std::vector<double>{0.5});
    CHECK(cfg.noise_axis == NoiseAxis::Pnoise);
    CHECK(cfg.reference == Reference::Exact);
    CHECK(cfg.seed == 99);
    CHECK(kind_of([&] { apply_json(cfg, nlohmann::json::parse(R"({"bogus": 1})")); }) == ErrorKind::Config);
    CHECK(kind_of([&] { apply_json(cfg, nlohmann::json::parse(R"({"m": "ten"})")); }) == ErrorKind::Config);
    CHECK(kind_of([&] { apply_json(cfg, nlohmann::json::parse(R"([1, 2])")); }) == ErrorKind::Config);

    auto invalid = [](auto &&edit, Command c = Command::Coefficients) {
        ExperimentConfig bad = desk_preset(c);
        edit(bad);
        return kind_of([&] { validate(bad, c); });
    };
    CHECK(invalid([](auto &c) { c.x_grid = {}; }) == ErrorKind::Config);
    CHECK(invalid([](auto &c) { c.x_grid = {1.2}; }) == ErrorKind::Config);
    CHECK(invalid([](auto &c) { c.pnoise_grid = {1.0}; }) == ErrorKind::Config);
    CHECK(invalid([](auto &c) { c.samples = 0; }) == ErrorKind::Config);
    CHECK(invalid([](auto &c) { c.orders = {}; }) == ErrorKind::Config);
    CHECK(invalid([](auto &c) { c.n = 11; }) == ErrorKind::Config);
    CHECK(invalid([](auto &c) { c.combo_budget = 10; }, Command::Cloud) == ErrorKind::Config);
    CHECK(invalid([](auto &c) { c.m = 30; c.n = 12; }, Command::Distributions) == ErrorKind::Config);
    for (Command c : {Command::Scatter, Command::Coefficients, Command::Scaling, Command::Cloud,
                      Command::Distributions}) {
        CHECK_NOTHROW(validate(desk_preset(c), c));
        CHECK_NOTHROW(validate(paper_preset(c), c));
    }
}

TEST_CASE("full-scale presets") {
    const auto scatter = paper_preset(Command::Scatter);
    CHECK(scatter.n == 10);
    CHECK(scatter.m == 15);
    CHECK(scatter.samples == 10'000);
    CHECK(scatter.orders == std::vector<int>{2, 3, 4});
    CHECK(paper_preset(Command::Scaling).matrices == 100);
    const auto cl = paper_preset(Command::Cloud);
    CHECK(cl.n == 4);
    CHECK(cl.m == 16);
    CHECK(cl.samples == 10'000);
    const auto dist = paper_preset(Command::Distributions);
    CHECK(dist.n == 5);
    CHECK(dist.m == 10);
    CHECK(dist.samples == 1'000'000);
}

TEST_CASE("config hash ignores workers and output directory") {
    ExperimentConfig a = desk_preset(Command::Scatter), b = a;
    b.workers = 7;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a, Command::Scatter) == config_hash(b, Command::Scatter));
    CHECK(config_hash(a, Command::Scatter).size() == 16);
    b.seed = 2;
    CHECK(config_hash(a, Command::Scatter) != config_hash(b, Command::Scatter));
    CHECK(config_hash(a, Command::Scatter) != config_hash(a, Command::Cloud));
}

TEST_CASE("fit_slope") {
    CHECK(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
    CHECK(kind_of([] { fit_slope({1, 1}, {0, 1}); }) == ErrorKind::DegenerateInput);
}

TEST_CASE("every subcommand is byte-identical across worker counts") {
    for (Command c : {Command::Scatter, Command::Coefficients, Command::Scaling, Command::Cloud,
                      Command::Distributions}) {
        for (NoiseAxis axis : {NoiseAxis::Xind, NoiseAxis::Pnoise}) {
            const auto d1 = scratch("w1"), d3 = scratch("w3");
            ExperimentConfig c1 = tiny(c, d1), c3 = tiny(c, d3);
            c1.noise_axis = c3.noise_axis = axis;
            c3.workers = 3;
            const auto r1 = run(c, c1, true);
            const auto r3 = run(c, c3, true);
            REQUIRE(r1.files.size() == r3.files.size());
            CHECK_FALSE(r1.files.empty());
            for (std::size_t i = 0; i < r1.files.size(); ++i) {
                CHECK(r1.files[i].filename() == r3.files[i].filename());
                const auto text = slurp(r1.files[i]);
                CHECK(text == slurp(r3.files[i]));
                CHECK(text.find('\r') == std::string::npos);
                CHECK(text.rfind("# bosonbench ", 0) == 0);
                CHECK(text.find("# config_hash: " + config_hash(c1, c)) != std::string::npos);
                CHECK(text.find("# seed: 1\n") != std::string::npos);
            }
            CHECK(r1.summary.dump() == r3.summary.dump());
            fs::remove_all(d1);
            fs::remove_all(d3);
        }
    }
}

TEST_CASE("coefficients rows") {
    const auto dir = scratch("coef");
    ExperimentConfig cfg = tiny(Command::Coefficients, dir);
    cfg.x_grid = {1.0};
    const auto r = run(Command::Coefficients, cfg, true);
    const auto text = slurp(dir / "coefficients_xind.csv");
    std::istringstream lines(text);
    std::string line;
    int data = 0;
    while (std::getline(lines, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("noise_value", 0) != 0) ++data;
    }
    CHECK(data == 2);  // one grid point, two orders
    CHECK(r.summary["results"].size() == 2);
    fs::remove_all(dir);
}

TEST_CASE("scatter slope at the noiseless endpoint") {
    const auto dir = scratch("slope");
    ExperimentConfig cfg = desk_preset(Command::Scatter);
    cfg.x_grid = {1.0};
    cfg.orders = {2};
    cfg.reference = Reference::Exact;
    cfg.samples = 20'000;
    cfg.output_dir = dir;
    const auto r = run(Command::Scatter, cfg, true);
    CHECK(std::abs(r.summary["results"][0]["slope"].get<double>() - 1.0) <= 0.05);
    fs::remove_all(dir);
}

TEST_CASE("distributions at zero noise sit at the sampling floor") {
    const auto dir = scratch("dist");
    ExperimentConfig cfg = desk_preset(Command::Distributions);
    cfg.pnoise_grid = {0.0, 0.1, 0.3};
    cfg.x_grid = {};
    cfg.output_dir = dir;
    const auto r = run(Command::Distributions, cfg, true);
    const auto rows = r.summary["results"]["pnoise"];
    const double k = r.summary["results"]["patterns"].get<double>();
    CHECK(rows[0]["D_exact"].get<double>() <= 1e-12);
    CHECK(rows[0]["D_empirical"].get<double>() <= 1.5 * std::sqrt(k / (2 * M_PI * cfg.samples)));
    CHECK(rows[0]["D_exact"].get<double>() <= rows[1]["D_exact"].get<double>());
    CHECK(rows[1]["D_exact"].get<double>() <= rows[2]["D_exact"].get<double>());
    fs::remove_all(dir);
}

TEST_CASE("cli exit codes") {
    const auto dir = scratch("cli");
    fs::create_directories(dir);
    const auto cfg = dir / "cfg.json";
    const auto bad = dir / "bad.json";
    const auto empty = dir / "empty.json";
    std::ofstream(cfg) << R"({"m": 5, "n": 2, "samples": 200, "x_grid": [1.0], "orders": [2]})";
    std::ofstream(bad) << R"({"m": 5, "typo": 1})";
    std::ofstream(empty) << R"({"x_grid": []})";
    const std::string out = " --out " + (dir / "out").string();
    CHECK(run_cli("coefficients --config " + cfg.string() + out) == 0);
    CHECK(run_cli("coefficients --config " + cfg.string() + out + " --seed 4 --workers 2 --noise-axis xind") == 0);
    CHECK(run_cli("scatter --config " + empty.string() + out) == 2);
    CHECK(run_cli("scatter --config " + bad.string() + out) == 2);
    CHECK(run_cli("scatter --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("scatter --noise-axis sideways") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("") == 2);
    std::ofstream(dir / "blocker") << "x";
    CHECK(run_cli("coefficients --config " + cfg.string() + " --out " + (dir / "blocker" / "sub").string()) == 4);
    CHECK(run_cli("--version") == 0);
    fs::remove_all(dir);
}
