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

#include "bosonbench/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "bosonbench/error.hpp"
#include "bosonbench/parallel.hpp"

namespace bosonbench {

namespace {

std::vector<std::size_t> checked_input_modes(const ComplexMatrix &m, const OccupationPattern &input) {
    if (!m.is_square() || input.size() != m.rows()) {
        throw Error(ErrorKind::InvalidDimension, "input pattern length does not match the interferometer");
    }
    if (!input.collision_free()) {
        throw Error(ErrorKind::UnsupportedInput, "samplers need a collision-free input");
    }
    if (input.total() > kMaxSamplerPhotons) {
        throw Error(ErrorKind::TooLarge, "chain-rule sampling is limited to " +
                                             std::to_string(kMaxSamplerPhotons) + " photons");
    }
    return input.photon_modes();
}

// Column j of M as output weights |M(i, j)|^2.
std::vector<std::vector<double>> single_photon_weights(const ComplexMatrix &m,
                                                       std::span<const std::size_t> input_modes) {
    std::vector<std::vector<double>> weights;
    weights.reserve(input_modes.size());
    for (std::size_t j : input_modes) {
        std::vector<double> w(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            w[i] = std::norm(m(i, j));
        }
        weights.push_back(std::move(w));
    }
    return weights;
}

OccupationPattern partial_dist_shot(const ComplexMatrix &m, std::span<const std::size_t> input_modes,
                                    const std::vector<std::vector<double>> &routing, double x_ind, Rng &rng) {
    const PhotonLabels labels = collapse_photon_labels(static_cast<int>(input_modes.size()), x_ind, rng);
    OccupationPattern out(m.rows());
    if (!labels.coherent.empty()) {
        std::vector<std::size_t> modes;
        modes.reserve(labels.coherent.size());
        for (std::size_t photon : labels.coherent) {
            modes.push_back(input_modes[photon]);
        }
        out = draw_ideal(m, modes, rng);
    }
    for (std::size_t photon : labels.distinguished) {
        ++out[rng.discrete(routing[photon])];
    }
    return out;
}

}  // namespace

OccupationPattern draw_ideal(const ComplexMatrix &m, std::span<const std::size_t> input_modes, Rng &rng) {
    const std::size_t modes = m.rows();
    const std::size_t n = input_modes.size();
    OccupationPattern out(modes);
    if (n == 0) {
        return out;
    }

    std::vector<std::size_t> columns(input_modes.begin(), input_modes.end());
    rng.shuffle(std::span<std::size_t>(columns));
    // a(i, l): amplitude from the l-th (permuted) input photon to output mode i.
    ComplexMatrix a(modes, n);
    for (std::size_t i = 0; i < modes; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
            a(i, l) = m(i, columns[l]);
        }
    }

    std::vector<std::size_t> drawn;
    drawn.reserve(n);
    std::vector<double> weights(modes);
    for (std::size_t i = 0; i < modes; ++i) {
        weights[i] = std::norm(a(i, 0));
    }
    drawn.push_back(rng.discrete(weights));

    std::vector<Complex> minors(n);
    std::vector<Complex> row_sums(n);
    for (std::size_t k = 2; k <= n; ++k) {
        // Ryser over column subsets of {0..k-1} with rows = drawn modes; the
        // subset's product contributes to every minor whose deleted column is
        // outside the subset.
        const std::size_t rows = k - 1;
        std::fill(minors.begin(), minors.begin() + k, Complex{});
        std::fill(row_sums.begin(), row_sums.begin() + rows, Complex{});
        const std::uint64_t full = (std::uint64_t{1} << k) - 1;
        std::uint64_t gray = 0;
        for (std::uint64_t step = 1; step <= full; ++step) {
            const int col = std::countr_zero(step);
            const std::uint64_t bit = std::uint64_t{1} << col;
            gray ^= bit;
            if (gray & bit) {
                for (std::size_t r = 0; r < rows; ++r) {
                    row_sums[r] += a(drawn[r], col);
                }
            } else {
                for (std::size_t r = 0; r < rows; ++r) {
                    row_sums[r] -= a(drawn[r], col);
                }
            }
            Complex prod = row_sums[0];
            for (std::size_t r = 1; r < rows; ++r) {
                prod *= row_sums[r];
            }
            if (std::popcount(gray) & 1) {
                prod = -prod;
            }
            for (std::uint64_t absent = ~gray & full; absent != 0; absent &= absent - 1) {
                minors[std::countr_zero(absent)] += prod;
            }
        }
        if (rows & 1) {
            for (std::size_t l = 0; l < k; ++l) {
                minors[l] = -minors[l];
            }
        }
        for (std::size_t i = 0; i < modes; ++i) {
            Complex amp{};
            for (std::size_t l = 0; l < k; ++l) {
                amp += a(i, l) * minors[l];
            }
            weights[i] = std::norm(amp);
        }
        drawn.push_back(rng.discrete(weights));
    }
    for (std::size_t j : drawn) {
        ++out[j];
    }
    return out;
}

SampleSet sample_ideal(const ComplexMatrix &m, const OccupationPattern &input, std::size_t samples, Seed seed,
                       unsigned workers) {
    const auto input_modes = checked_input_modes(m, input);
    SampleSet set;
    set.m = m.rows();
    set.n = input.total();
    set.seed = seed;
    set.patterns.resize(samples);
    parallel_for(samples, workers, [&](std::size_t shot) {
        Rng rng(derive_seed(seed, {shot}));
        set.patterns[shot] = draw_ideal(m, input_modes, rng);
    });
    return set;
}

PhotonLabels collapse_photon_labels(int n, double x_ind, Rng &rng) {
    check_x_ind(x_ind);
    PhotonLabels labels;
    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(x_ind)) {
            labels.coherent.push_back(static_cast<std::size_t>(i));
        } else {
            labels.distinguished.push_back(static_cast<std::size_t>(i));
        }
    }
    return labels;
}

OccupationPattern draw_partial_dist(const ComplexMatrix &m, std::span<const std::size_t> input_modes,
                                    double x_ind, Rng &rng) {
    return partial_dist_shot(m, input_modes, single_photon_weights(m, input_modes), x_ind, rng);
}

SampleSet sample_partial_dist(const ComplexMatrix &m, const OccupationPattern &input, double x_ind,
                              std::size_t samples, Seed seed, unsigned workers) {
    check_x_ind(x_ind);
    const auto input_modes = checked_input_modes(m, input);
    const auto routing = single_photon_weights(m, input_modes);
    SampleSet set;
    set.m = m.rows();
    set.n = input.total();
    set.seed = seed;
    set.config = NoiseConfig::distinguishability(x_ind);
    set.patterns.resize(samples);
    parallel_for(samples, workers, [&](std::size_t shot) {
        Rng rng(derive_seed(seed, {shot}));
        set.patterns[shot] = partial_dist_shot(m, input_modes, routing, x_ind, rng);
    });
    return set;
}

ComplexMatrix extend_network(const ComplexMatrix &m, int n, double x_ind) {
    check_x_ind(x_ind);
    if (!m.is_square()) {
        throw Error(ErrorKind::InvalidDimension, "interferometer must be square");
    }
    const std::size_t modes = m.rows();
    if (n < 1 || static_cast<std::size_t>(n) > modes) {
        throw Error(ErrorKind::InvalidDimension, "extend_network needs 1 <= n <= m");
    }
    const std::size_t dim = modes * static_cast<std::size_t>(n + 1);

    ComplexMatrix blocks(dim, dim);
    for (std::size_t b = 0; b <= static_cast<std::size_t>(n); ++b) {
        for (std::size_t i = 0; i < modes; ++i) {
            for (std::size_t j = 0; j < modes; ++j) {
                blocks(b * modes + i, b * modes + j) = m(i, j);
            }
        }
    }

    // The n beam splitters act on disjoint mode pairs, so their product is a
    // single sparse orthogonal matrix.
    const double c = std::sqrt(x_ind);
    const double s = std::sqrt(1.0 - x_ind);
    ComplexMatrix splitters = ComplexMatrix::identity(dim);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        const std::size_t actual = i;
        const std::size_t virt = (i + 1) * modes + i;
        splitters(actual, actual) = c;
        splitters(actual, virt) = -s;
        splitters(virt, actual) = s;
        splitters(virt, virt) = c;
    }
    return blocks * splitters;
}

OccupationPattern extended_input(std::size_t m, int n) {
    OccupationPattern p(m * static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) {
        p[static_cast<std::size_t>(i)] = 1;
    }
    return p;
}

OccupationPattern fold_extended(const OccupationPattern &extended, std::size_t m) {
    if (m == 0 || extended.size() % m != 0) {
        throw Error(ErrorKind::InvalidDimension, "extended pattern length is not a multiple of m");
    }
    OccupationPattern out(m);
    for (std::size_t k = 0; k < extended.size(); ++k) {
        out[k % m] += extended[k];
    }
    return out;
}

OccupationPattern apply_loss(const OccupationPattern &t, double eta, Rng &rng) {
    check_eta(eta);
    OccupationPattern out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (int k = 0; k < t[i]; ++k) {
            if (rng.bernoulli(eta)) {
                ++out[i];
            }
        }
    }
    return out;
}

OccupationPattern apply_dark_counts(const OccupationPattern &t, double p_dc, Rng &rng) {
    check_p_dc(p_dc);
    OccupationPattern out = t;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (rng.bernoulli(p_dc)) {
            ++out[i];
        }
    }
    return out;
}

SampleSet sample_noisy_postselected(const ComplexMatrix &m, const OccupationPattern &input,
                                    const NoiseConfig &config, std::size_t accepted, Seed seed,
                                    const PostSelectionOptions &options) {
    config.validate();
    const auto input_modes = checked_input_modes(m, input);
    const auto routing = single_photon_weights(m, input_modes);
    const int n = input.total();

    SampleSet set;
    set.m = m.rows();
    set.n = n;
    set.seed = seed;
    set.config = config;
    set.post_selected = true;
    set.patterns.reserve(accepted);

    std::size_t raw = 0;
    std::size_t last_accepted = 0;
    std::vector<OccupationPattern> batch;
    std::vector<char> keep;
    while (set.patterns.size() < accepted) {
        // Batch size depends only on how many patterns are still missing, so
        // the raw-shot indices consumed are independent of the worker count.
        const std::size_t missing = accepted - set.patterns.size();
        const std::size_t batch_size = std::max<std::size_t>(4096, missing + missing / 4);
        batch.assign(batch_size, OccupationPattern());
        keep.assign(batch_size, 0);
        parallel_for(batch_size, options.workers, [&](std::size_t b) {
            Rng rng(derive_seed(seed, {raw + b}));
            OccupationPattern t = partial_dist_shot(m, input_modes, routing, config.x_ind, rng);
            t = apply_loss(t, config.eta, rng);
            t = apply_dark_counts(t, config.p_dc, rng);
            keep[b] = t.total() == n ? 1 : 0;
            batch[b] = std::move(t);
        });
        for (std::size_t b = 0; b < batch_size && set.patterns.size() < accepted; ++b) {
            if (keep[b]) {
                set.patterns.push_back(std::move(batch[b]));
                last_accepted = raw + b;
            }
        }
        raw += batch_size;
        if (set.patterns.size() < accepted && raw >= options.min_raw_shots) {
            const double rate = static_cast<double>(set.patterns.size()) / static_cast<double>(raw);
            if (rate < options.acceptance_floor) {
                throw Error(ErrorKind::InfeasiblePostSelection,
                            "acceptance rate " + std::to_string(rate) + " after " + std::to_string(raw) +
                                " raw shots is below the floor " + std::to_string(options.acceptance_floor));
            }
        }
    }
    set.acceptance_rate =
        accepted == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(last_accepted + 1);
    return set;
}

void write_csv(std::ostream &out, const SampleSet &samples) {
    out << "pattern\n";
    for (const auto &p : samples.patterns) {
        out << p.to_string() << '\n';
    }
}

std::vector<OccupationPattern> read_patterns_csv(std::istream &in) {
    std::vector<OccupationPattern> patterns;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line == "pattern") {
                continue;
            }
        }
        patterns.push_back(OccupationPattern::parse(line));
    }
    return patterns;
}

nlohmann::ordered_json sidecar_json(const SampleSet &samples) {
    nlohmann::ordered_json j;
    j["m"] = samples.m;
    j["n"] = samples.n;
    j["seed"] = samples.seed;
    j["config"] = to_json(samples.config);
    j["acceptance_rate"] = samples.acceptance_rate;
    j["N"] = samples.patterns.size();
    return j;
}

}  // namespace bosonbench
