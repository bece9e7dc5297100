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

#ifndef BOSONBENCH_DISTRIBUTIONS_HPP
#define BOSONBENCH_DISTRIBUTIONS_HPP

// Exact output-probability oracles. These are brute force by design and
// meant for desk-scale instances (tens to a few thousand patterns).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"

#include "bosonbench/linalg.hpp"
#include "bosonbench/pattern.hpp"

namespace bosonbench {

struct ExactDistribution {
    std::vector<OccupationPattern> patterns;
    std::vector<double> probs;

    double total() const;
    /// Probability of p, zero if absent. Linear scan.
    double probability_of(const OccupationPattern &p) const;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// C(m + n - 1, n), saturating at UINT64_MAX.
std::uint64_t pattern_count(std::size_t m, int n);

/// All length-m patterns with total n in canonical order, i.e. descending
/// lexicographic: m=2, n=2 gives (2,0), (1,1), (0,2).
std::vector<OccupationPattern> enumerate_patterns(std::size_t m, int n,
                                                  std::uint64_t cap = kDefaultEnumerationCap);

/// Values in [-1e-12, 0) become 0; anything more negative is an internal
/// consistency error.
double clamp_probability(double p);

/// |Perm(M^{S,T})|^2 / (prod s_i! prod t_i!).
double prob_ideal(const ComplexMatrix &m, const OccupationPattern &input,
                  const OccupationPattern &output);

/// Largest photon number for the permutation-sum evaluation of prob_partial_dist.
inline constexpr int kMaxPermutationSumPhotons = 9;

/// Uniform partial distinguishability: sum over permutations sigma of
/// x^(number of photons moved by sigma) * Perm(A (.) conj(A_sigma)) / prod t_i!,
/// A = M^{S,T}. Input must be collision free.
double prob_partial_dist(const ComplexMatrix &m, const OccupationPattern &input,
                         const OccupationPattern &output, double x_ind);

/// Classical distinguishable-particle law Perm(|A|^2) / prod t_i!.
double prob_distinguishable(const ComplexMatrix &m, const OccupationPattern &input,
                            const OccupationPattern &output);

/// Balanced output loss: binomial thinning of every n-photon ideal pattern.
/// Zero when |T| > n.
double prob_lossy(const ComplexMatrix &m, const OccupationPattern &input,
                  const OccupationPattern &output, double eta);

/// At most one dark count per detector, each with probability p_dc. Zero when |T| < n.
double prob_dark(const ComplexMatrix &m, const OccupationPattern &input,
                 const OccupationPattern &output, double p_dc);

/// Probability that loss followed by dark counts leaves exactly n counts.
/// Independent of the interferometer.
double postselection_probability(int n, std::size_t m, double eta, double p_dc);

/// Loss then dark counts applied to a partially distinguishable (x_ind = 1:
/// ideal) n-photon output, conditioned on observing exactly n counts.
double prob_noisy_postselected(const ComplexMatrix &m, const OccupationPattern &input,
                               const OccupationPattern &output, double eta, double p_dc,
                               double x_ind = 1.0);

// Full distributions, computed by pushing probability mass forward from the
// n-photon patterns. These are the second route to the point-wise functions
// above. Pattern order is canonical within each photon number, photon numbers
// ascending.
ExactDistribution ideal_distribution(const ComplexMatrix &m, const OccupationPattern &input);
ExactDistribution partial_dist_distribution(const ComplexMatrix &m, const OccupationPattern &input,
                                            double x_ind);
ExactDistribution lossy_distribution(const ComplexMatrix &m, const OccupationPattern &input, double eta);
ExactDistribution dark_distribution(const ComplexMatrix &m, const OccupationPattern &input, double p_dc);
/// Normalized over all n-photon patterns.
ExactDistribution noisy_postselected_distribution(const ComplexMatrix &m, const OccupationPattern &input,
                                                  double eta, double p_dc, double x_ind = 1.0);

/// Relative frequencies of the observed patterns, canonical order.
ExactDistribution empirical_distribution(std::span<const OccupationPattern> samples);

/// Half the L1 distance, patterns outer-joined with zero fill.
double tvd(const ExactDistribution &p, const ExactDistribution &q);

/// Descending probability; ties in canonical pattern order.
ExactDistribution sorted_background(const ExactDistribution &dist);

/// CSV with header "pattern,prob"; doubles in shortest round-trip form.
void write_csv(std::ostream &out, const ExactDistribution &dist);
/// {"patterns": ["1:0:..", ...], "probs": [...]}
nlohmann::ordered_json to_json(const ExactDistribution &dist);
ExactDistribution distribution_from_json(const nlohmann::json &j);

}  // namespace bosonbench

#endif
