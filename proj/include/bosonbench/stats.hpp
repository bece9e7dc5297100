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

#ifndef BOSONBENCH_STATS_HPP
#define BOSONBENCH_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "bosonbench/distributions.hpp"
#include "bosonbench/linalg.hpp"
#include "bosonbench/noise.hpp"
#include "bosonbench/sampler.hpp"

namespace bosonbench {

/// Blocks of 0-based positions {0..t-1}.
using SetPartition = std::vector<std::vector<std::size_t>>;

inline constexpr int kMaxCorrelatorOrder = 8;

/// All Bell(t) partitions of {0..t-1}, generated from restricted growth
/// strings in lexicographic order (so the single block comes first).
std::vector<SetPartition> set_partitions(int t);

/// A weighted list of patterns: samples carry uniform weights, exact
/// distributions their probabilities. Non-owning.
class PatternSource {
   public:
    PatternSource(const SampleSet &samples);            // NOLINT(google-explicit-constructor)
    PatternSource(const ExactDistribution &distribution);  // NOLINT(google-explicit-constructor)

    std::size_t modes() const noexcept {
        return modes_;
    }
    std::size_t size() const noexcept {
        return patterns_.size();
    }
    std::span<const OccupationPattern> patterns() const noexcept {
        return patterns_;
    }
    /// Empty when every pattern weighs 1/size().
    std::span<const double> weights() const noexcept {
        return weights_;
    }
    bool exact() const noexcept {
        return !weights_.empty();
    }

   private:
    std::span<const OccupationPattern> patterns_;
    std::span<const double> weights_;
    std::size_t modes_ = 0;
};

/// <prod_{i in modes} n_i> over the source. Modes are 0-based and distinct.
double raw_moment(const PatternSource &source, std::span<const std::size_t> modes);

/// Every product moment over mode subsets of size 1..max_order, accumulated
/// in one pass over the patterns (only occupied modes contribute).
class MomentTable {
   public:
    MomentTable(const PatternSource &source, int max_order);

    /// Moment of a strictly increasing 0-based mode subset, 1 <= size <= max_order.
    double moment(std::span<const std::size_t> modes) const;

    std::size_t modes() const noexcept {
        return modes_;
    }
    int max_order() const noexcept {
        return max_order_;
    }

   private:
    std::size_t modes_;
    int max_order_;
    std::vector<std::vector<double>> moments_;  // [size][combinatorial rank]
};

/// Joint cumulant of the photon numbers in `modes` (strictly increasing, 0-based):
/// sum over partitions pi of (|pi|-1)! (-1)^(|pi|-1) prod_B <prod_{i in B} n_i>.
double correlator(const PatternSource &source, std::span<const std::size_t> modes);
double correlator(const MomentTable &table, std::span<const std::size_t> modes);

/// Correlators over every t-subset, keys in lexicographic subset order.
struct CorrelatorSet {
    int order = 0;
    std::size_t modes = 0;
    std::vector<std::vector<std::size_t>> keys;  // 0-based, strictly increasing
    std::vector<double> values;

    std::size_t size() const noexcept {
        return values.size();
    }
    std::optional<double> find(std::span<const std::size_t> key) const;
    double sum() const;
};

inline constexpr std::uint64_t kDefaultCorrelatorCap = 2'000'000;

/// C(m, t), saturating.
std::uint64_t binomial_count(std::size_t m, std::size_t t);

CorrelatorSet all_correlators(const PatternSource &source, int t, std::uint64_t cap = kDefaultCorrelatorCap);
CorrelatorSet all_correlators(const MomentTable &table, int t, std::uint64_t cap = kDefaultCorrelatorCap);

/// CSV "modes,kappa" with 1-based dash-separated modes ("1-4-7").
void write_csv(std::ostream &out, const CorrelatorSet &set);
/// CSV "modes,kappa_test,kappa_comp"; both sets must share keys.
void write_scatter_csv(std::ostream &out, const CorrelatorSet &test, const CorrelatorSet &comp);

double pearson(std::span<const double> x, std::span<const double> y);
/// 1-based ranks, ties share the mean of their rank range.
std::vector<double> average_ranks(std::span<const double> values);
double spearman(std::span<const double> x, std::span<const double> y);

inline constexpr double kGammaDenominatorFloor = 1e-9;

/// Ratio of the signed correlator sums. Throws NearZeroDenominatorError.
double gamma(const CorrelatorSet &test, const CorrelatorSet &comp, double floor = kGammaDenominatorFloor);

struct CvCs {
    double cv;
    double cs;
    bool degenerate;
};

inline constexpr double kCvMeanFloor = 1e-9;

/// cv = s / mean with the (k-1) sample deviation; cs = (1/k) sum ((v - mean)/s)^3.
/// Degenerate when s == 0 or |mean| < eps * max|v|; cv is NaN then, cs too if s == 0.
CvCs cv_cs(std::span<const double> values, double eps = kCvMeanFloor);

struct CloudPoint {
    std::vector<std::size_t> input_combo;  // 0-based occupied input modes
    double cv;
    double cs;
    bool degenerate;
};

struct CloudOptions {
    std::size_t samples_per_combo = 10'000;
    /// 0 means every one of the C(m, n) input combinations.
    std::size_t combo_budget = 0;
    /// Seed for choosing the combination subset; the sampling seed when unset.
    /// Fixing it keeps the same combinations across noise values.
    std::optional<Seed> selection_seed;
    unsigned workers = 1;
};

/// n-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<std::size_t>> input_combinations(std::size_t m, int n);

/// The combinations a cloud run visits: all of them, or a seed-determined
/// uniform subset of size `budget` returned in lexicographic order.
std::vector<std::size_t> select_combinations(std::uint64_t total, std::size_t budget, Seed seed);

/// One CloudPoint per input combination and per order. Samples for the
/// combination with lexicographic rank r come from derive_seed(seed, {r}) and
/// are shared by all orders.
std::map<int, std::vector<CloudPoint>> cloud(const ComplexMatrix &m, int n, std::span<const int> orders,
                                             const NoiseConfig &noise, const CloudOptions &options, Seed seed);

std::vector<CloudPoint> cloud(const ComplexMatrix &m, int n, int t, const NoiseConfig &noise,
                              const CloudOptions &options, Seed seed);

struct CloudSummary {
    double mean_cv = 0.0;
    double mean_cs = 0.0;
    double stderr_cv = 0.0;
    double stderr_cs = 0.0;
    std::size_t points = 0;  // non-degenerate points behind the means
    std::size_t degenerate = 0;
};

/// Means and standard errors over the non-degenerate points.
CloudSummary summarize(std::span<const CloudPoint> points);

/// CSV "combo,cv,cs,flag" with 1-based dash-separated combos.
void write_csv(std::ostream &out, std::span<const CloudPoint> points);

struct OrderReport {
    int order = 0;
    double gamma = 0.0;
    bool gamma_flagged = false;  // comparison sum below the floor; gamma is NaN
    double test_sum = 0.0;
    double comp_sum = 0.0;
    double pearson = 0.0;
    double spearman = 0.0;
    bool coefficients_flagged = false;  // a constant correlator list; pearson and spearman are NaN
    double mean_cv = 0.0;  // cv/cs of the test correlators (one input combination)
    double mean_cs = 0.0;
    std::size_t correlators = 0;
};

struct EvaluationReport {
    std::vector<OrderReport> orders;
    std::size_t test_samples = 0;
    std::size_t reference_samples = 0;  // 0 for an exact reference
    bool exact_reference = false;
};

EvaluationReport evaluate(const PatternSource &test, const PatternSource &reference, std::span<const int> orders);

nlohmann::ordered_json to_json(const EvaluationReport &report);

}  // namespace bosonbench

#endif
