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

#include "bosonbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "bosonbench/error.hpp"
#include "bosonbench/format.hpp"
#include "bosonbench/parallel.hpp"

namespace bosonbench {

namespace {

// Tag for the combination-selection substream, distinct from any combination rank.
constexpr std::uint64_t kSelectionStream = 0xC10D5E1EC7ULL;

void check_order(int t) {
    if (t < 1 || t > kMaxCorrelatorOrder) {
        throw Error(ErrorKind::Range,
                    "correlator order must lie in [1, " + std::to_string(kMaxCorrelatorOrder) + "], got " +
                        std::to_string(t));
    }
}

void grow_partitions(std::vector<std::size_t> &labels, std::size_t pos, std::size_t blocks,
                     std::vector<SetPartition> &out) {
    if (pos == labels.size()) {
        SetPartition p(blocks);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            p[labels[i]].push_back(i);
        }
        out.push_back(std::move(p));
        return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
        labels[pos] = b;
        grow_partitions(labels, pos + 1, b == blocks ? blocks + 1 : blocks, out);
    }
}

std::uint64_t choose(std::size_t n, std::size_t k) {
    return binomial_count(n, k);
}

// Colexicographic rank of a strictly increasing subset.
std::uint64_t subset_rank(std::span<const std::size_t> modes) {
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        rank += choose(modes[i], i + 1);
    }
    return rank;
}

void for_each_combination(std::size_t m, std::size_t t,
                          const std::function<void(const std::vector<std::size_t> &)> &fn) {
    if (t > m) {
        return;
    }
    std::vector<std::size_t> c(t);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        fn(c);
        if (t == 0) {
            return;
        }
        std::size_t i = t;
        while (i > 0 && c[i - 1] == m - t + i - 1) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++c[i - 1];
        for (std::size_t j = i; j < t; ++j) {
            c[j] = c[j - 1] + 1;
        }
    }
}

struct PartitionTerm {
    double coefficient;
    SetPartition blocks;
};

std::vector<PartitionTerm> cumulant_terms(int t) {
    std::vector<PartitionTerm> terms;
    for (auto &p : set_partitions(t)) {
        const std::size_t k = p.size();
        double coef = 1.0;
        for (std::size_t i = 2; i < k; ++i) {
            coef *= static_cast<double>(i);
        }
        if ((k - 1) % 2 == 1) {
            coef = -coef;
        }
        terms.push_back({coef, std::move(p)});
    }
    return terms;
}

template <typename MomentFn>
double assemble_cumulant(const std::vector<PartitionTerm> &terms, std::span<const std::size_t> modes,
                         MomentFn &&moment) {
    double total = 0.0;
    std::vector<std::size_t> block_modes;
    for (const auto &term : terms) {
        double prod = term.coefficient;
        for (const auto &block : term.blocks) {
            block_modes.clear();
            for (std::size_t pos : block) {
                block_modes.push_back(modes[pos]);
            }
            prod *= moment(std::span<const std::size_t>(block_modes));
            if (prod == 0.0) {
                break;
            }
        }
        total += prod;
    }
    return total;
}

void check_modes(std::span<const std::size_t> modes, std::size_t m) {
    if (modes.empty()) {
        throw Error(ErrorKind::InvalidDimension, "mode subset must be non-empty");
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] >= m || (i > 0 && modes[i] <= modes[i - 1])) {
            throw Error(ErrorKind::InvalidDimension, "modes must be strictly increasing and below m");
        }
    }
}

std::string join_one_based(std::span<const std::size_t> modes) {
    std::string s;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (i > 0) {
            s += '-';
        }
        s += std::to_string(modes[i] + 1);
    }
    return s;
}

CorrelatorSet correlators_from(int t, std::size_t m, std::uint64_t cap,
                               const std::function<double(std::span<const std::size_t>)> &kappa) {
    check_order(t);
    const std::uint64_t count = binomial_count(m, static_cast<std::size_t>(t));
    if (count > cap) {
        throw Error(ErrorKind::TooLarge, std::to_string(count) + " correlators of order " + std::to_string(t) +
                                             " exceed the cap of " + std::to_string(cap));
    }
    CorrelatorSet set;
    set.order = t;
    set.modes = m;
    set.keys.reserve(count);
    set.values.reserve(count);
    for_each_combination(m, static_cast<std::size_t>(t), [&](const std::vector<std::size_t> &c) {
        set.keys.push_back(c);
        set.values.push_back(kappa(c));
    });
    return set;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<SetPartition> set_partitions(int t) {
    check_order(t);
    std::vector<SetPartition> out;
    std::vector<std::size_t> labels(static_cast<std::size_t>(t), 0);
    grow_partitions(labels, 1, 1, out);
    return out;
}

PatternSource::PatternSource(const SampleSet &samples) : patterns_(samples.patterns), modes_(samples.m) {
    if (samples.patterns.empty()) {
        throw Error(ErrorKind::EmptyInput, "sample set is empty");
    }
}

PatternSource::PatternSource(const ExactDistribution &distribution)
    : patterns_(distribution.patterns), weights_(distribution.probs) {
    if (distribution.patterns.empty()) {
        throw Error(ErrorKind::EmptyInput, "distribution is empty");
    }
    modes_ = distribution.patterns.front().size();
}

double raw_moment(const PatternSource &source, std::span<const std::size_t> modes) {
    if (modes.empty()) {
        throw Error(ErrorKind::InvalidDimension, "mode subset must be non-empty");
    }
    for (std::size_t j : modes) {
        if (j >= source.modes()) {
            throw Error(ErrorKind::InvalidDimension, "mode index out of range");
        }
    }
    const auto patterns = source.patterns();
    const auto weights = source.weights();
    double total = 0.0;
    for (std::size_t k = 0; k < patterns.size(); ++k) {
        double prod = 1.0;
        for (std::size_t j : modes) {
            prod *= patterns[k][j];
        }
        total += source.exact() ? weights[k] * prod : prod;
    }
    return source.exact() ? total : total / static_cast<double>(patterns.size());
}

MomentTable::MomentTable(const PatternSource &source, int max_order)
    : modes_(source.modes()), max_order_(max_order) {
    check_order(max_order);
    if (modes_ > 64) {
        throw Error(ErrorKind::TooLarge, "moment tables support at most 64 modes");
    }
    moments_.resize(static_cast<std::size_t>(max_order) + 1);
    for (int k = 1; k <= max_order; ++k) {
        const std::uint64_t count = binomial_count(modes_, static_cast<std::size_t>(k));
        if (count > kDefaultCorrelatorCap) {
            throw Error(ErrorKind::TooLarge, "moment table of order " + std::to_string(k) + " needs " +
                                                 std::to_string(count) + " entries");
        }
        moments_[static_cast<std::size_t>(k)].assign(count, 0.0);
    }

    const auto patterns = source.patterns();
    const auto weights = source.weights();
    std::vector<std::size_t> occupied_modes;
    std::vector<double> occupied_counts;
    std::function<void(std::size_t, std::size_t, double, std::uint64_t, double)> visit =
        [&](std::size_t start, std::size_t depth, double prod, std::uint64_t rank, double weight) {
            for (std::size_t i = start; i < occupied_modes.size(); ++i) {
                const double p = prod * occupied_counts[i];
                const std::uint64_t r = rank + choose(occupied_modes[i], depth + 1);
                moments_[depth + 1][r] += weight * p;
                if (static_cast<int>(depth + 1) < max_order_) {
                    visit(i + 1, depth + 1, p, r, weight);
                }
            }
        };
    for (std::size_t k = 0; k < patterns.size(); ++k) {
        occupied_modes.clear();
        occupied_counts.clear();
        for (std::size_t j = 0; j < modes_; ++j) {
            if (patterns[k][j] != 0) {
                occupied_modes.push_back(j);
                occupied_counts.push_back(patterns[k][j]);
            }
        }
        visit(0, 0, 1.0, 0, source.exact() ? weights[k] : 1.0);
    }
    if (!source.exact()) {
        const double inv = 1.0 / static_cast<double>(patterns.size());
        for (auto &level : moments_) {
            for (double &v : level) {
                v *= inv;
            }
        }
    }
}

double MomentTable::moment(std::span<const std::size_t> modes) const {
    if (modes.empty() || static_cast<int>(modes.size()) > max_order_) {
        throw Error(ErrorKind::InvalidDimension, "moment order outside the table");
    }
    return moments_[modes.size()][subset_rank(modes)];
}

double correlator(const PatternSource &source, std::span<const std::size_t> modes) {
    check_modes(modes, source.modes());
    check_order(static_cast<int>(modes.size()));
    const auto terms = cumulant_terms(static_cast<int>(modes.size()));
    return assemble_cumulant(terms, modes,
                             [&](std::span<const std::size_t> block) { return raw_moment(source, block); });
}

double correlator(const MomentTable &table, std::span<const std::size_t> modes) {
    check_modes(modes, table.modes());
    if (static_cast<int>(modes.size()) > table.max_order()) {
        throw Error(ErrorKind::InvalidDimension, "correlator order exceeds the moment table");
    }
    const auto terms = cumulant_terms(static_cast<int>(modes.size()));
    return assemble_cumulant(terms, modes,
                             [&](std::span<const std::size_t> block) { return table.moment(block); });
}

std::optional<double> CorrelatorSet::find(std::span<const std::size_t> key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key, [](const auto &a, std::span<const std::size_t> b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    if (it != keys.end() && std::equal(it->begin(), it->end(), key.begin(), key.end())) {
        return values[static_cast<std::size_t>(it - keys.begin())];
    }
    return std::nullopt;
}

double CorrelatorSet::sum() const {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

std::uint64_t binomial_count(std::size_t m, std::size_t t) {
    if (t > m) {
        return 0;
    }
    t = std::min(t, m - t);
    unsigned __int128 r = 1;
    for (std::size_t i = 1; i <= t; ++i) {
        r = r * (m - t + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(r);
}

CorrelatorSet all_correlators(const PatternSource &source, int t, std::uint64_t cap) {
    check_order(t);
    const MomentTable table(source, t);
    return all_correlators(table, t, cap);
}

CorrelatorSet all_correlators(const MomentTable &table, int t, std::uint64_t cap) {
    check_order(t);
    if (t > table.max_order()) {
        throw Error(ErrorKind::InvalidDimension, "correlator order exceeds the moment table");
    }
    const auto terms = cumulant_terms(t);
    return correlators_from(t, table.modes(), cap, [&](std::span<const std::size_t> modes) {
        return assemble_cumulant(terms, modes, [&](std::span<const std::size_t> block) { return table.moment(block); });
    });
}

void write_csv(std::ostream &out, const CorrelatorSet &set) {
    out << "modes,kappa\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        out << join_one_based(set.keys[i]) << ',' << format_double(set.values[i]) << '\n';
    }
}

void write_scatter_csv(std::ostream &out, const CorrelatorSet &test, const CorrelatorSet &comp) {
    if (test.keys != comp.keys) {
        throw Error(ErrorKind::InvalidDimension, "test and comparison correlators have different keys");
    }
    out << "modes,kappa_test,kappa_comp\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
        out << join_one_based(test.keys[i]) << ',' << format_double(test.values[i]) << ','
            << format_double(comp.values[i]) << '\n';
    }
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::InvalidDimension, "pearson needs equal-length inputs");
    }
    if (x.size() < 2) {
        throw Error(ErrorKind::DegenerateInput, "pearson needs at least two points");
    }
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorKind::DegenerateInput, "pearson is undefined for a constant list");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::InvalidDimension, "spearman needs equal-length inputs");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

double gamma(const CorrelatorSet &test, const CorrelatorSet &comp, double floor) {
    if (test.order != comp.order || test.keys != comp.keys) {
        throw Error(ErrorKind::InvalidDimension, "gamma needs correlator sets with the same order and keys");
    }
    const double test_sum = test.sum();
    const double comp_sum = comp.sum();
    if (!(std::abs(comp_sum) >= floor)) {
        throw NearZeroDenominatorError(test_sum, comp_sum);
    }
    return test_sum / comp_sum;
}

CvCs cv_cs(std::span<const double> values, double eps) {
    const std::size_t k = values.size();
    if (k < 3) {
        throw Error(ErrorKind::DegenerateInput, "cv_cs needs at least three values");
    }
    const double mu = mean_of(values);
    double ss = 0.0;
    double max_abs = 0.0;
    for (double v : values) {
        ss += (v - mu) * (v - mu);
        max_abs = std::max(max_abs, std::abs(v));
    }
    const double s = std::sqrt(ss / static_cast<double>(k - 1));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (s == 0.0) {
        return {nan, nan, true};
    }
    double third = 0.0;
    for (double v : values) {
        const double z = (v - mu) / s;
        third += z * z * z;
    }
    const double cs = third / static_cast<double>(k);
    if (std::abs(mu) < eps * max_abs) {
        return {nan, cs, true};
    }
    return {s / mu, cs, false};
}

std::vector<std::vector<std::size_t>> input_combinations(std::size_t m, int n) {
    if (n < 0 || static_cast<std::size_t>(n) > m) {
        throw Error(ErrorKind::PhotonNumber, "need 0 <= n <= m single-photon inputs");
    }
    std::vector<std::vector<std::size_t>> out;
    for_each_combination(m, static_cast<std::size_t>(n), [&](const std::vector<std::size_t> &c) { out.push_back(c); });
    return out;
}

std::vector<std::size_t> select_combinations(std::uint64_t total, std::size_t budget, Seed seed) {
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), 0);
    if (budget == 0 || budget >= total) {
        return all;
    }
    Rng rng(derive_seed(seed, {kSelectionStream}));
    // Partial Fisher-Yates: the first `budget` slots end up a uniform subset.
    for (std::size_t i = 0; i < budget; ++i) {
        const std::size_t j = i + rng.uniform_index(total - i);
        std::swap(all[i], all[j]);
    }
    all.resize(budget);
    std::sort(all.begin(), all.end());
    return all;
}

std::map<int, std::vector<CloudPoint>> cloud(const ComplexMatrix &m, int n, std::span<const int> orders,
                                             const NoiseConfig &noise, const CloudOptions &options, Seed seed) {
    noise.validate();
    if (orders.empty()) {
        throw Error(ErrorKind::Config, "cloud needs at least one correlator order");
    }
    int max_order = 0;
    for (int t : orders) {
        check_order(t);
        max_order = std::max(max_order, t);
    }
    const std::size_t modes = m.rows();
    const auto combos = input_combinations(modes, n);
    const auto chosen = select_combinations(combos.size(), options.combo_budget, options.selection_seed.value_or(seed));

    std::map<int, std::vector<CloudPoint>> result;
    for (int t : orders) {
        result[t].resize(chosen.size());
    }
    const bool distinguishability_only = noise.eta == 1.0 && noise.p_dc == 0.0;
    parallel_for(chosen.size(), options.workers, [&](std::size_t idx) {
        const std::size_t rank = chosen[idx];
        const auto &combo = combos[rank];
        const OccupationPattern input = OccupationPattern::from_modes(modes, combo);
        const Seed combo_seed = derive_seed(seed, {rank});
        const SampleSet samples =
            distinguishability_only
                ? sample_partial_dist(m, input, noise.x_ind, options.samples_per_combo, combo_seed, 1)
                : sample_noisy_postselected(m, input, noise, options.samples_per_combo, combo_seed, {});
        const MomentTable table(samples, max_order);
        for (int t : orders) {
            const CorrelatorSet set = all_correlators(table, t);
            const CvCs stats = cv_cs(set.values);
            result[t][idx] = CloudPoint{combo, stats.cv, stats.cs, stats.degenerate};
        }
    });
    return result;
}

std::vector<CloudPoint> cloud(const ComplexMatrix &m, int n, int t, const NoiseConfig &noise,
                              const CloudOptions &options, Seed seed) {
    const int orders[] = {t};
    return std::move(cloud(m, n, orders, noise, options, seed).at(t));
}

CloudSummary summarize(std::span<const CloudPoint> points) {
    CloudSummary s;
    std::vector<double> cvs;
    std::vector<double> css;
    for (const auto &p : points) {
        if (p.degenerate) {
            ++s.degenerate;
            continue;
        }
        cvs.push_back(p.cv);
        css.push_back(p.cs);
    }
    s.points = cvs.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto mean_and_stderr = [&](const std::vector<double> &v, double &mean, double &se) {
        if (v.empty()) {
            mean = se = nan;
            return;
        }
        mean = mean_of(v);
        if (v.size() < 2) {
            se = nan;
            return;
        }
        double ss = 0.0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        se = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
    };
    mean_and_stderr(cvs, s.mean_cv, s.stderr_cv);
    mean_and_stderr(css, s.mean_cs, s.stderr_cs);
    return s;
}

void write_csv(std::ostream &out, std::span<const CloudPoint> points) {
    out << "combo,cv,cs,flag\n";
    for (const auto &p : points) {
        out << join_one_based(p.input_combo) << ',' << format_double(p.cv) << ',' << format_double(p.cs) << ','
            << (p.degenerate ? 1 : 0) << '\n';
    }
}

EvaluationReport evaluate(const PatternSource &test, const PatternSource &reference, std::span<const int> orders) {
    if (test.modes() != reference.modes()) {
        throw Error(ErrorKind::InvalidDimension, "test and reference differ in mode count");
    }
    if (orders.empty()) {
        throw Error(ErrorKind::Config, "evaluate needs at least one order");
    }
    const int max_order = *std::max_element(orders.begin(), orders.end());
    const MomentTable test_table(test, max_order);
    const MomentTable ref_table(reference, max_order);

    EvaluationReport report;
    report.test_samples = test.size();
    report.exact_reference = reference.exact();
    report.reference_samples = reference.exact() ? 0 : reference.size();
    for (int t : orders) {
        const CorrelatorSet test_set = all_correlators(test_table, t);
        const CorrelatorSet comp_set = all_correlators(ref_table, t);
        OrderReport r;
        r.order = t;
        r.correlators = test_set.size();
        r.test_sum = test_set.sum();
        r.comp_sum = comp_set.sum();
        try {
            r.gamma = gamma(test_set, comp_set);
        } catch (const NearZeroDenominatorError &) {
            r.gamma = std::numeric_limits<double>::quiet_NaN();
            r.gamma_flagged = true;
        }
        try {
            r.pearson = pearson(test_set.values, comp_set.values);
            r.spearman = spearman(test_set.values, comp_set.values);
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::DegenerateInput) {
                throw;
            }
            r.pearson = r.spearman = std::numeric_limits<double>::quiet_NaN();
            r.coefficients_flagged = true;
        }
        if (test_set.size() >= 3) {
            const CvCs stats = cv_cs(test_set.values);
            r.mean_cv = stats.cv;
            r.mean_cs = stats.cs;
        } else {
            r.mean_cv = r.mean_cs = std::numeric_limits<double>::quiet_NaN();
        }
        report.orders.push_back(r);
    }
    return report;
}

nlohmann::ordered_json to_json(const EvaluationReport &report) {
    auto num = [](double v) -> nlohmann::ordered_json {
        if (std::isfinite(v)) {
            return v;
        }
        return nullptr;
    };
    nlohmann::ordered_json j;
    j["test_samples"] = report.test_samples;
    j["reference_samples"] = report.reference_samples;
    j["exact_reference"] = report.exact_reference;
    auto &orders = j["orders"] = nlohmann::ordered_json::array();
    for (const auto &r : report.orders) {
        nlohmann::ordered_json o;
        o["order"] = r.order;
        o["correlators"] = r.correlators;
        o["gamma"] = num(r.gamma);
        o["gamma_flagged"] = r.gamma_flagged;
        o["test_sum"] = r.test_sum;
        o["comp_sum"] = r.comp_sum;
        o["coefficients_flagged"] = r.coefficients_flagged;
        o["pearson"] = num(r.pearson);
        o["spearman"] = num(r.spearman);
        o["mean_cv"] = num(r.mean_cv);
        o["mean_cs"] = num(r.mean_cs);
        orders.push_back(std::move(o));
    }
    return j;
}

}  // namespace bosonbench
