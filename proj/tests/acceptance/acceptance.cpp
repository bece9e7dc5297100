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

// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bosonbench/distributions.hpp"
#include "bosonbench/linalg.hpp"
#include "bosonbench/sampler.hpp"
#include "bosonbench/stats.hpp"
#include "experiment.hpp"
#include "../oracles.hpp"

using namespace bosonbench;
namespace fs = std::filesystem;
namespace bx = bosonbench::experiment;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

OccupationPattern first_modes(std::size_t m, int n) {
    OccupationPattern s(m);
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = 1;
    return s;
}

template <typename Fn>
double support_sum(std::size_t m, int lo, int hi, Fn &&fn) {
    double s = 0.0;
    for (int k = lo; k <= hi; ++k)
        for (const auto &t : enumerate_patterns(m, k)) s += fn(t);
    return s;
}

Outcome c1_permanent() {
    std::mt19937_64 gen(20260101);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 7; ++n) {
        for (int k = 0; k < 50; ++k) {
            const auto a = oracle::random_matrix(n, gen);
            const Complex expect = oracle::laplace_permanent(a);
            worst = std::max(worst, std::abs(permanent(a) - expect) / std::abs(expect));
        }
    }
    return {worst <= 1e-10, "max relative error " + fmt(worst) + " (limit 1e-10)"};
}

Outcome c2_normalization() {
    double worst = 0.0;
    for (auto [m_modes, n] : {std::pair<std::size_t, int>{4, 2}, {5, 3}}) {
        const auto m = haar_unitary(m_modes, 200 + m_modes);
        const auto s = first_modes(m_modes, n);
        auto track = [&](double total) { worst = std::max(worst, std::abs(total - 1.0)); };
        track(support_sum(m_modes, n, n, [&](auto &t) { return prob_ideal(m, s, t); }));
        for (double x : {0.0, 0.3, 0.7, 1.0})
            track(support_sum(m_modes, n, n, [&](auto &t) { return prob_partial_dist(m, s, t, x); }));
        track(support_sum(m_modes, 0, n, [&](auto &t) { return prob_lossy(m, s, t, 0.7); }));
        track(support_sum(m_modes, n, n + static_cast<int>(m_modes), [&](auto &t) { return prob_dark(m, s, t, 0.1); }));
        track(support_sum(m_modes, n, n, [&](auto &t) { return prob_noisy_postselected(m, s, t, 0.9, 0.1); }));
    }
    return {worst <= 1e-8, "max |sum - 1| " + fmt(worst) + " (limit 1e-8)"};
}

Outcome c3_limits() {
    double worst = 0.0;
    for (auto [m_modes, n] : {std::pair<std::size_t, int>{4, 2}, {5, 3}}) {
        const auto m = haar_unitary(m_modes, 300 + m_modes);
        const auto s = first_modes(m_modes, n);
        for (const auto &t : enumerate_patterns(m_modes, n)) {
            const double ideal = prob_ideal(m, s, t);
            const auto a = submatrix(m, s, t);
            ComplexMatrix sq(a.rows(), a.cols());
            for (std::size_t i = 0; i < a.rows(); ++i)
                for (std::size_t j = 0; j < a.cols(); ++j) sq(i, j) = std::norm(a(i, j));
            const double classical = std::abs(oracle::laplace_permanent(sq)) / oracle::factorial_product(t);
            worst = std::max(worst, std::abs(prob_partial_dist(m, s, t, 1.0) - ideal));
            worst = std::max(worst, std::abs(prob_partial_dist(m, s, t, 0.0) - classical));
            worst = std::max(worst, std::abs(prob_lossy(m, s, t, 1.0) - ideal));
            worst = std::max(worst, std::abs(prob_dark(m, s, t, 0.0) - ideal));
        }
        for (int k = 0; k < n; ++k)
            for (const auto &t : enumerate_patterns(m_modes, k)) worst = std::max(worst, prob_lossy(m, s, t, 1.0));
    }
    return {worst <= 1e-10, "max deviation " + fmt(worst) + " (limit 1e-10)"};
}

Outcome c4_sampler_tvd() {
    const std::size_t modes = 5, n_samples = 100'000;
    const auto m = haar_unitary(modes, 404);
    const auto s = first_modes(modes, 3);
    std::vector<std::pair<std::string, double>> results;
    auto empirical = [](const SampleSet &set) { return empirical_distribution(set.patterns); };
    results.emplace_back("ideal", tvd(empirical(sample_ideal(m, s, n_samples, 1, 0)), ideal_distribution(m, s)));
    for (double x : {0.0, 0.5, 1.0}) {
        results.emplace_back("x=" + fmt(x), tvd(empirical(sample_partial_dist(m, s, x, n_samples, 2, 0)),
                                                partial_dist_distribution(m, s, x)));
    }
    PostSelectionOptions options;
    options.workers = 0;
    results.emplace_back("eta=0.9,p_dc=0.1",
                         tvd(empirical(sample_noisy_postselected(m, s, NoiseConfig{1.0, 0.9, 0.1}, n_samples, 3, options)),
                             noisy_postselected_distribution(m, s, 0.9, 0.1)));
    bool pass = true;
    std::string detail;
    for (const auto &[name, d] : results) {
        pass = pass && d <= 0.03;
        detail += name + ":" + fmt(d) + " ";
    }
    return {pass, detail + "(limit 0.03)"};
}

Outcome c5_extended_network() {
    const auto m = haar_unitary(4, 505);
    double worst = 0.0;
    bool dims = true;
    for (double x : {0.0, 0.25, 0.5, 1.0}) {
        const auto u = extend_network(m, 2, x);
        dims = dims && u.rows() == 12 && u.cols() == 12;
        worst = std::max(worst, unitarity_error(u));
    }
    ComplexMatrix direct_sum(12, 12);
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) direct_sum(4 * b + i, 4 * b + j) = m(i, j);
    const double collapse = max_abs_diff(extend_network(m, 2, 1.0), direct_sum);
    const bool pass = dims && worst <= 1e-10 && collapse == 0.0;
    return {pass, "dimension 12: " + std::string(dims ? "yes" : "no") + ", unitarity error " + fmt(worst) +
                      ", |U(x=1) - (+)M| " + fmt(collapse)};
}

Outcome c6_cumulants() {
    const auto m = haar_unitary(5, 606);
    const auto exact = ideal_distribution(m, first_modes(5, 3));
    const auto law = oracle::to_law(exact);
    double worst = 0.0;
    for (int t = 1; t <= 4; ++t) {
        const auto set = all_correlators(exact, t);
        for (std::size_t i = 0; i < set.size(); ++i)
            worst = std::max(worst, std::abs(set.values[i] - oracle::cumulant(law, set.keys[i])));
    }
    const double sum_rule = std::abs(all_correlators(exact, 1).sum() - 3.0);
    return {worst <= 1e-10 && sum_rule <= 1e-12,
            "max |kappa - recursion| " + fmt(worst) + " (limit 1e-10), |sum <n_i> - n| " + fmt(sum_rule)};
}

struct GammaRow {
    double value;
    int order;
    double gamma;
};

std::vector<GammaRow> coefficient_rows(bx::NoiseAxis axis, const std::vector<double> &grid, Seed seed,
                                       const fs::path &dir) {
    bx::ExperimentConfig cfg = bx::desk_preset(bx::Command::Coefficients);
    cfg.n = 5;
    cfg.m = 10;
    cfg.samples = 10'000;
    cfg.orders = {2, 3};
    cfg.noise_axis = axis;
    (axis == bx::NoiseAxis::Xind ? cfg.x_grid : cfg.pnoise_grid) = grid;
    cfg.seed = seed;
    cfg.output_dir = dir;
    cfg.workers = 0;
    const auto result = bx::run(bx::Command::Coefficients, cfg, true);
    std::vector<GammaRow> rows;
    for (const auto &r : result.summary["results"]) {
        rows.push_back({r["noise_value"].get<double>(), r["order"].get<int>(),
                        r["gamma"].is_null() ? NAN : r["gamma"].get<double>()});
    }
    return rows;
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "bosonbench_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Outcome c7_gamma_xind() {
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    std::map<int, std::vector<double>> xs, gammas;
    std::map<int, std::map<double, double>> mean;
    bool endpoint = true;
    std::string endpoints;
    for (Seed seed = 1; seed <= 5; ++seed) {
        for (const auto &r : coefficient_rows(bx::NoiseAxis::Xind, grid, seed, scratch_dir())) {
            xs[r.order].push_back(r.value);
            gammas[r.order].push_back(r.gamma);
            mean[r.order][r.value] += r.gamma / 5.0;
            if (r.value == 1.0) {
                endpoint = endpoint && r.gamma >= 0.9 && r.gamma <= 1.1;
                endpoints += fmt(r.gamma) + " ";
            }
        }
    }
    bool pass = endpoint;
    std::string detail;
    double range[4] = {0, 0, 0, 0};
    for (int t : {2, 3}) {
        const double rho = spearman(xs[t], gammas[t]);
        pass = pass && rho >= 0.9;
        double lo = INFINITY, hi = -INFINITY;
        for (const auto &[x, g] : mean[t]) {
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        range[t] = hi - lo;
        detail += "t=" + std::to_string(t) + " spearman " + fmt(rho) + ", range " + fmt(range[t]) + "; ";
    }
    pass = pass && range[3] > range[2];
    return {pass, detail + "gamma(1): " + endpoints};
}

Outcome c8_gamma_pnoise() {
    const std::vector<double> grid{0.0, 0.1, 0.2, 0.3};
    std::map<int, std::vector<double>> ps, gammas;
    for (Seed seed = 1; seed <= 5; ++seed) {
        for (const auto &r : coefficient_rows(bx::NoiseAxis::Pnoise, grid, seed, scratch_dir())) {
            ps[r.order].push_back(r.value);
            gammas[r.order].push_back(r.gamma);
        }
    }
    bool pass = true;
    std::string detail;
    for (int t : {2, 3}) {
        const double rho = spearman(ps[t], gammas[t]);
        pass = pass && rho <= -0.8;
        detail += "t=" + std::to_string(t) + " spearman " + fmt(rho) + " ";
    }
    return {pass, detail + "(limit -0.8)"};
}

Outcome c9_tvd_shape() {
    bool pass = true;
    std::string detail;
    for (Seed seed : {909u, 910u, 911u}) {
        const auto m = haar_unitary(8, seed);
        const auto s = first_modes(8, 4);
        const auto ideal = ideal_distribution(m, s);
        std::vector<double> d;
        for (int k = 0; k <= 10; ++k) {
            const double p = 0.05 * k;
            d.push_back(tvd(noisy_postselected_distribution(m, s, 1.0 - p, p), ideal));
        }
        bool monotone = true;
        for (std::size_t k = 1; k < d.size(); ++k) monotone = monotone && d[k] >= d[k - 1] - 1e-12;
        const double slope_p = std::abs(d[1] - d[0]) / 0.05;
        const double slope_x =
            std::abs(tvd(partial_dist_distribution(m, s, 0.95), ideal) - tvd(partial_dist_distribution(m, s, 1.0), ideal)) /
            0.05;
        pass = pass && monotone && slope_p < slope_x;
        detail += "M" + std::to_string(seed) + ": monotone " + (monotone ? "yes" : "no") + ", |dD/dp| " +
                  fmt(slope_p) + " < |dD/dx| " + fmt(slope_x) + "; ";
    }
    return {pass, detail};
}

Outcome c10_cloud() {
    const auto m = haar_unitary(12, 1010);
    CloudOptions options;
    options.samples_per_combo = 5'000;
    options.combo_budget = 200;
    options.selection_seed = 1011;
    options.workers = 0;
    const std::vector<int> orders{2, 3};
    const auto coherent = cloud(m, 3, orders, NoiseConfig::distinguishability(1.0), options, 1);
    const auto classical = cloud(m, 3, orders, NoiseConfig::distinguishability(0.0), options, 2);
    bool pass = true;
    std::string detail;
    double sep_cv[4] = {0, 0, 0, 0}, sep_cs[4] = {0, 0, 0, 0};
    for (int t : orders) {
        const auto a = summarize(coherent.at(t)), b = summarize(classical.at(t));
        sep_cv[t] = std::abs(a.mean_cv - b.mean_cv) / std::hypot(a.stderr_cv, b.stderr_cv);
        sep_cs[t] = std::abs(a.mean_cs - b.mean_cs) / std::hypot(a.stderr_cs, b.stderr_cs);
        if (sep_cv[t] < 3.0 || sep_cs[t] < 3.0 || a.points != 200 || b.points != 200) {
            pass = false;
            detail += "t=" + std::to_string(t) + " below 3 SE or degenerate points; ";
        }
        detail += "t=" + std::to_string(t) + " CV " + fmt(sep_cv[t]) + " SE, CS " + fmt(sep_cs[t]) + " SE; ";
    }
    if (sep_cv[3] < sep_cv[2]) {
        pass = false;
        detail += "CV t=3 < t=2; ";
    }
    if (sep_cs[3] < sep_cs[2]) {
        pass = false;
        detail += "CS t=3 < t=2; ";
    }
    return {pass, detail};
}

std::string read_all(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome c11_determinism() {
    std::size_t files = 0;
    bool pass = true;
    for (auto c : {bx::Command::Scatter, bx::Command::Coefficients, bx::Command::Scaling, bx::Command::Cloud,
                   bx::Command::Distributions}) {
        for (auto axis : {bx::NoiseAxis::Xind, bx::NoiseAxis::Pnoise}) {
            std::vector<std::vector<std::string>> runs;
            for (unsigned workers : {1u, 1u, 4u}) {
                bx::ExperimentConfig cfg = bx::desk_preset(c);
                cfg.noise_axis = axis;
                cfg.workers = workers;
                cfg.output_dir = scratch_dir();
                const auto r = bx::run(c, cfg, true);
                std::vector<std::string> contents;
                for (const auto &f : r.files) contents.push_back(f.filename().string() + "\n" + read_all(f));
                contents.push_back(r.summary.dump());
                runs.push_back(std::move(contents));
            }
            pass = pass && runs[0] == runs[1] && runs[0] == runs[2];
            files += runs[0].size() - 1;
        }
    }
    return {pass, std::to_string(files) + " files compared over repeat and 1 vs 4 workers"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double limit_seconds;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria{
        {1, "permanent oracle equivalence", 5, c1_permanent},
        {2, "distribution normalization", 60, c2_normalization},
        {3, "noise-limit identities", 60, c3_limits},
        {4, "sampler-vs-oracle TVD", 300, c4_sampler_tvd},
        {5, "extended-network oracle", 60, c5_extended_network},
        {6, "cumulant correctness", 60, c6_cumulants},
        {7, "gamma vs x_ind trend", 600, c7_gamma_xind},
        {8, "gamma vs p_noise trend", 600, c8_gamma_pnoise},
        {9, "TVD curve shape", 600, c9_tvd_shape},
        {10, "cloud separation", 900, c10_cloud},
        {11, "determinism", 600, c11_determinism},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << o.detail
                  << " [" << fmt(secs) << " s of " << fmt(c.limit_seconds) << " s]" << std::endl;
    }
    fs::remove_all(fs::temp_directory_path() / "bosonbench_acceptance");
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
