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

#ifndef BOSONBENCH_SAMPLER_HPP
#define BOSONBENCH_SAMPLER_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"

#include "bosonbench/linalg.hpp"
#include "bosonbench/noise.hpp"
#include "bosonbench/pattern.hpp"
#include "bosonbench/random.hpp"

namespace bosonbench {

/// Largest photon number the chain-rule sampler accepts.
inline constexpr int kMaxSamplerPhotons = 16;

struct SampleSet {
    std::size_t m = 0;
    int n = 0;
    std::vector<OccupationPattern> patterns;
    Seed seed = 0;
    NoiseConfig config;
    /// Accepted shots over raw shots; 1 when nothing is post-selected.
    double acceptance_rate = 1.0;
    bool post_selected = false;

    std::size_t size() const noexcept {
        return patterns.size();
    }
};

/// One exact draw from the ideal output law for photons entering the listed
/// input modes (one photon per entry). Chain rule: the columns are permuted
/// uniformly, then photon k is placed with weights
/// |sum_l A(j, l) Perm(minor_l)|^2, the minors being the (k-1) x (k-1)
/// submatrices on the modes already drawn.
OccupationPattern draw_ideal(const ComplexMatrix &m, std::span<const std::size_t> input_modes, Rng &rng);

/// N i.i.d. ideal patterns. Shot k uses the substream derive_seed(seed, {k}).
SampleSet sample_ideal(const ComplexMatrix &m, const OccupationPattern &input, std::size_t samples, Seed seed,
                       unsigned workers = 1);

struct PhotonLabels {
    /// Photon indices (0-based, input order) that interfere coherently.
    std::vector<std::size_t> coherent;
    /// Photon indices that are fully distinguishable, each its own singleton block.
    std::vector<std::size_t> distinguished;
};

/// Each photon independently stays coherent with probability x_ind.
PhotonLabels collapse_photon_labels(int n, double x_ind, Rng &rng);

/// One partially distinguishable draw: coherent photons through draw_ideal,
/// distinguished photons routed one by one with weights |M(j, s)|^2.
OccupationPattern draw_partial_dist(const ComplexMatrix &m, std::span<const std::size_t> input_modes,
                                    double x_ind, Rng &rng);

SampleSet sample_partial_dist(const ComplexMatrix &m, const OccupationPattern &input, double x_ind,
                              std::size_t samples, Seed seed, unsigned workers = 1);

/// The m(n+1)-mode network of n virtual beam splitters and n+1 copies of M.
/// Photon i (0-based) enters actual mode i; its beam splitter couples actual
/// mode i with mode i of virtual block i+1 (global index (i+1)m + i) with
/// cos(w) = sqrt(x_ind). In the column-input convention used throughout, the
/// beam splitters act first: U = (M (+) ... (+) M) B_1 ... B_n.
ComplexMatrix extend_network(const ComplexMatrix &m, int n, double x_ind);

/// Input |1,...,1,0,...,0> of the extended network (photons on actual modes 0..n-1).
OccupationPattern extended_input(std::size_t m, int n);

/// Sums the counts of every block onto mode index j.
OccupationPattern fold_extended(const OccupationPattern &extended, std::size_t m);

/// Per-photon survival with probability eta.
OccupationPattern apply_loss(const OccupationPattern &t, double eta, Rng &rng);

/// Each mode independently gains one count with probability p_dc.
OccupationPattern apply_dark_counts(const OccupationPattern &t, double p_dc, Rng &rng);

struct PostSelectionOptions {
    unsigned workers = 1;
    /// Acceptance-rate floor, enforced once min_raw_shots raw shots were drawn.
    double acceptance_floor = 1e-4;
    std::size_t min_raw_shots = 100'000;
};

/// Partially distinguishable draw, then loss, then dark counts; keeps shots
/// whose total equals n until `accepted` patterns are collected. Raw shot k
/// uses derive_seed(seed, {k}); acceptance_rate = accepted / (index of the
/// last accepted shot + 1).
SampleSet sample_noisy_postselected(const ComplexMatrix &m, const OccupationPattern &input,
                                    const NoiseConfig &config, std::size_t accepted, Seed seed,
                                    const PostSelectionOptions &options = {});

/// One pattern per line, colon-separated counts, after a "pattern" header.
void write_csv(std::ostream &out, const SampleSet &samples);
std::vector<OccupationPattern> read_patterns_csv(std::istream &in);
/// Sidecar {m, n, seed, config, acceptance_rate, N}.
nlohmann::ordered_json sidecar_json(const SampleSet &samples);

}  // namespace bosonbench

#endif
