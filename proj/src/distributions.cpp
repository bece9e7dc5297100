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

#include "bosonbench/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "bosonbench/error.hpp"
#include "bosonbench/format.hpp"
#include "bosonbench/noise.hpp"

namespace bosonbench {

namespace {

constexpr double kImagResidueTolerance = 1e-10;

double factorial_product(const OccupationPattern &p) {
    double prod = 1.0;
    for (int c : p.counts()) {
        for (int k = 2; k <= c; ++k) {
            prod *= k;
        }
    }
    return prod;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

void check_shapes(const ComplexMatrix &m, const OccupationPattern &input, const OccupationPattern &output) {
    if (!m.is_square() || input.size() != m.rows() || output.size() != m.rows()) {
        throw Error(ErrorKind::InvalidDimension, "patterns and interferometer disagree on the mode count");
    }
}

void enumerate_into(std::vector<OccupationPattern> &out, std::vector<int> &counts, std::size_t mode,
                    int remaining) {
    if (mode + 1 == counts.size()) {
        counts[mode] = remaining;
        out.emplace_back(counts);
        return;
    }
    for (int c = remaining; c >= 0; --c) {
        counts[mode] = c;
        enumerate_into(out, counts, mode + 1, remaining - c);
    }
}

// Visits every pattern T with 0 <= T_i <= upper_i.
void for_each_subpattern(const OccupationPattern &upper, const std::function<void(const OccupationPattern &)> &fn) {
    OccupationPattern current(upper.size());
    while (true) {
        fn(current);
        std::size_t i = 0;
        for (; i < upper.size(); ++i) {
            if (current[i] < upper[i]) {
                ++current[i];
                break;
            }
            current[i] = 0;
        }
        if (i == upper.size()) {
            return;
        }
    }
}

// Visits every 0/1 vector over m modes with exactly k ones.
void for_each_k_subset(std::size_t m, int k, const std::function<void(const std::vector<int> &)> &fn) {
    if (k < 0 || static_cast<std::size_t>(k) > m) {
        return;
    }
    std::vector<int> mask(m, 0);
    std::fill(mask.begin(), mask.begin() + k, 1);
    // prev_permutation from the sorted-descending start enumerates all arrangements.
    do {
        fn(mask);
    } while (std::prev_permutation(mask.begin(), mask.end()));
}

bool total_then_canonical(const OccupationPattern &a, const OccupationPattern &b) {
    const int ta = a.total();
    const int tb = b.total();
    if (ta != tb) {
        return ta < tb;
    }
    return canonical_less(a, b);
}

ExactDistribution from_map(const std::map<OccupationPattern, double> &mass) {
    std::vector<std::pair<OccupationPattern, double>> items(mass.begin(), mass.end());
    std::sort(items.begin(), items.end(),
              [](const auto &a, const auto &b) { return total_then_canonical(a.first, b.first); });
    ExactDistribution dist;
    dist.patterns.reserve(items.size());
    dist.probs.reserve(items.size());
    for (auto &[p, w] : items) {
        dist.patterns.push_back(p);
        dist.probs.push_back(clamp_probability(w));
    }
    return dist;
}

// Base n-photon law: ideal when x_ind == 1, otherwise the permutation sum.
double base_probability(const ComplexMatrix &m, const OccupationPattern &input, const OccupationPattern &output,
                        double x_ind) {
    return x_ind == 1.0 ? prob_ideal(m, input, output) : prob_partial_dist(m, input, output, x_ind);
}

double lossy_point(const ComplexMatrix &m, const OccupationPattern &input, const OccupationPattern &output,
                   double eta, double x_ind) {
    const int n = input.total();
    if (output.total() > n) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto &full : enumerate_patterns(m.rows(), n)) {
        double weight = 1.0;
        for (std::size_t i = 0; i < full.size() && weight != 0.0; ++i) {
            if (full[i] < output[i]) {
                weight = 0.0;
                break;
            }
            weight *= binomial(full[i], output[i]) * std::pow(eta, output[i]) *
                      std::pow(1.0 - eta, full[i] - output[i]);
        }
        if (weight != 0.0) {
            total += base_probability(m, input, full, x_ind) * weight;
        }
    }
    return clamp_probability(total);
}

std::map<OccupationPattern, double> push_loss(const ExactDistribution &base, double eta) {
    std::map<OccupationPattern, double> mass;
    for (std::size_t k = 0; k < base.patterns.size(); ++k) {
        const auto &full = base.patterns[k];
        const double p = base.probs[k];
        if (p == 0.0) {
            continue;
        }
        for_each_subpattern(full, [&](const OccupationPattern &kept) {
            double weight = 1.0;
            for (std::size_t i = 0; i < full.size(); ++i) {
                weight *= binomial(full[i], kept[i]) * std::pow(eta, kept[i]) *
                          std::pow(1.0 - eta, full[i] - kept[i]);
            }
            if (weight != 0.0) {
                mass[kept] += p * weight;
            }
        });
    }
    return mass;
}

}  // namespace

double ExactDistribution::total() const {
    return std::accumulate(probs.begin(), probs.end(), 0.0);
}

double ExactDistribution::probability_of(const OccupationPattern &p) const {
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (patterns[i] == p) {
            return probs[i];
        }
    }
    return 0.0;
}

std::uint64_t pattern_count(std::size_t m, int n) {
    if (m == 0 || n < 0) {
        return 0;
    }
    unsigned __int128 r = 1;
    for (int i = 1; i <= n; ++i) {
        r = r * (m - 1 + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            return std::numeric_limits<std::uint64_t>::max();
        }
    }
    return static_cast<std::uint64_t>(r);
}

std::vector<OccupationPattern> enumerate_patterns(std::size_t m, int n, std::uint64_t cap) {
    if (m == 0) {
        throw Error(ErrorKind::InvalidDimension, "enumerate_patterns needs m >= 1");
    }
    if (n < 0) {
        throw Error(ErrorKind::PhotonNumber, "photon number must be non-negative");
    }
    const std::uint64_t count = pattern_count(m, n);
    if (count > cap) {
        throw Error(ErrorKind::TooLarge, std::to_string(count) + " patterns for m=" + std::to_string(m) +
                                             ", n=" + std::to_string(n) + " exceed the cap of " +
                                             std::to_string(cap));
    }
    std::vector<OccupationPattern> out;
    out.reserve(count);
    std::vector<int> counts(m, 0);
    enumerate_into(out, counts, 0, n);
    return out;
}

double clamp_probability(double p) {
    if (p >= 0.0) {
        return p;
    }
    if (p >= -1e-12) {
        return 0.0;
    }
    throw Error(ErrorKind::InternalConsistency, "negative probability " + format_double(p));
}

double prob_ideal(const ComplexMatrix &m, const OccupationPattern &input, const OccupationPattern &output) {
    check_shapes(m, input, output);
    const Complex perm = permanent(submatrix(m, input, output));
    return std::norm(perm) / (factorial_product(input) * factorial_product(output));
}

double prob_partial_dist(const ComplexMatrix &m, const OccupationPattern &input,
                         const OccupationPattern &output, double x_ind) {
    check_shapes(m, input, output);
    check_x_ind(x_ind);
    if (!input.collision_free()) {
        throw Error(ErrorKind::UnsupportedInput, "partial distinguishability needs a collision-free input");
    }
    const int n = input.total();
    if (n > kMaxPermutationSumPhotons) {
        throw Error(ErrorKind::TooLarge, "permutation sum is limited to " +
                                             std::to_string(kMaxPermutationSumPhotons) + " photons");
    }
    const ComplexMatrix a = submatrix(m, input, output);
    std::vector<std::size_t> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    ComplexMatrix product(a.rows(), a.cols());
    Complex total{};
    do {
        int moved = 0;
        for (std::size_t j = 0; j < sigma.size(); ++j) {
            moved += sigma[j] != j ? 1 : 0;
        }
        const double weight = std::pow(x_ind, moved);
        if (weight == 0.0) {
            continue;
        }
        const ComplexMatrix b = column_permute_conjugate(a, sigma);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                product(i, j) = a(i, j) * b(i, j);
            }
        }
        total += weight * permanent(product);
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    if (std::abs(total.imag()) > kImagResidueTolerance) {
        throw Error(ErrorKind::InternalConsistency,
                    "imaginary residue " + format_double(total.imag()) + " in partial-distinguishability sum");
    }
    return clamp_probability(total.real() / factorial_product(output));
}

double prob_distinguishable(const ComplexMatrix &m, const OccupationPattern &input,
                            const OccupationPattern &output) {
    check_shapes(m, input, output);
    ComplexMatrix a = submatrix(m, input, output);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            a(i, j) = std::norm(a(i, j));
        }
    }
    return permanent(a).real() / (factorial_product(input) * factorial_product(output));
}

double prob_lossy(const ComplexMatrix &m, const OccupationPattern &input, const OccupationPattern &output,
                  double eta) {
    check_shapes(m, input, output);
    check_eta(eta);
    return lossy_point(m, input, output, eta, 1.0);
}

double prob_dark(const ComplexMatrix &m, const OccupationPattern &input, const OccupationPattern &output,
                 double p_dc) {
    check_shapes(m, input, output);
    check_p_dc(p_dc);
    const int n = input.total();
    const int extra = output.total() - n;
    if (extra < 0) {
        return 0.0;
    }
    const std::size_t modes = m.rows();
    const double weight = std::pow(1.0 - p_dc, static_cast<double>(modes) - extra) * std::pow(p_dc, extra);
    if (weight == 0.0) {
        return 0.0;
    }
    double total = 0.0;
    for_each_k_subset(modes, extra, [&](const std::vector<int> &dark) {
        OccupationPattern photons(modes);
        for (std::size_t i = 0; i < modes; ++i) {
            photons[i] = output[i] - dark[i];
            if (photons[i] < 0) {
                return;
            }
        }
        total += prob_ideal(m, input, photons);
    });
    return clamp_probability(total * weight);
}

double postselection_probability(int n, std::size_t m, double eta, double p_dc) {
    double z = 0.0;
    const int modes = static_cast<int>(m);
    for (int kept = 0; kept <= n; ++kept) {
        const int dark = n - kept;
        if (dark > modes) {
            continue;
        }
        z += binomial(n, kept) * std::pow(eta, kept) * std::pow(1.0 - eta, n - kept) * binomial(modes, dark) *
             std::pow(p_dc, dark) * std::pow(1.0 - p_dc, modes - dark);
    }
    return z;
}

double prob_noisy_postselected(const ComplexMatrix &m, const OccupationPattern &input,
                               const OccupationPattern &output, double eta, double p_dc, double x_ind) {
    check_shapes(m, input, output);
    check_eta(eta);
    check_p_dc(p_dc);
    check_x_ind(x_ind);
    const int n = input.total();
    if (output.total() != n) {
        throw Error(ErrorKind::PhotonNumber, "post-selected patterns must carry exactly n counts");
    }
    const std::size_t modes = m.rows();
    const double z = postselection_probability(n, modes, eta, p_dc);
    if (z == 0.0) {
        throw Error(ErrorKind::DegenerateConfig, "no shot survives post-selection at this configuration");
    }
    // Every mode holding a count may carry one dark count; the rest is photons that survived.
    double numerator = 0.0;
    const std::size_t subsets = std::size_t{1} << modes;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        OccupationPattern kept = output;
        int dark = 0;
        bool valid = true;
        for (std::size_t i = 0; i < modes; ++i) {
            if (mask & (std::size_t{1} << i)) {
                if (kept[i] == 0) {
                    valid = false;
                    break;
                }
                --kept[i];
                ++dark;
            }
        }
        if (!valid) {
            continue;
        }
        const double dark_weight =
            std::pow(p_dc, dark) * std::pow(1.0 - p_dc, static_cast<double>(modes) - dark);
        if (dark_weight == 0.0) {
            continue;
        }
        numerator += lossy_point(m, input, kept, eta, x_ind) * dark_weight;
    }
    return clamp_probability(numerator / z);
}

ExactDistribution ideal_distribution(const ComplexMatrix &m, const OccupationPattern &input) {
    ExactDistribution dist;
    dist.patterns = enumerate_patterns(m.rows(), input.total());
    dist.probs.reserve(dist.patterns.size());
    for (const auto &t : dist.patterns) {
        dist.probs.push_back(prob_ideal(m, input, t));
    }
    return dist;
}

ExactDistribution partial_dist_distribution(const ComplexMatrix &m, const OccupationPattern &input,
                                            double x_ind) {
    ExactDistribution dist;
    dist.patterns = enumerate_patterns(m.rows(), input.total());
    dist.probs.reserve(dist.patterns.size());
    for (const auto &t : dist.patterns) {
        dist.probs.push_back(prob_partial_dist(m, input, t, x_ind));
    }
    return dist;
}

ExactDistribution lossy_distribution(const ComplexMatrix &m, const OccupationPattern &input, double eta) {
    check_eta(eta);
    return from_map(push_loss(ideal_distribution(m, input), eta));
}

ExactDistribution dark_distribution(const ComplexMatrix &m, const OccupationPattern &input, double p_dc) {
    check_p_dc(p_dc);
    const std::size_t modes = m.rows();
    if (modes > 24) {
        throw Error(ErrorKind::TooLarge, "dark-count enumeration is limited to 24 modes");
    }
    const ExactDistribution base = ideal_distribution(m, input);
    std::map<OccupationPattern, double> mass;
    const std::size_t subsets = std::size_t{1} << modes;
    for (std::size_t k = 0; k < base.patterns.size(); ++k) {
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            OccupationPattern t = base.patterns[k];
            int dark = 0;
            for (std::size_t i = 0; i < modes; ++i) {
                if (mask & (std::size_t{1} << i)) {
                    ++t[i];
                    ++dark;
                }
            }
            const double w = std::pow(p_dc, dark) * std::pow(1.0 - p_dc, static_cast<double>(modes) - dark);
            if (w != 0.0) {
                mass[t] += base.probs[k] * w;
            }
        }
    }
    return from_map(mass);
}

ExactDistribution noisy_postselected_distribution(const ComplexMatrix &m, const OccupationPattern &input,
                                                  double eta, double p_dc, double x_ind) {
    check_eta(eta);
    check_p_dc(p_dc);
    check_x_ind(x_ind);
    const int n = input.total();
    const std::size_t modes = m.rows();
    const double z = postselection_probability(n, modes, eta, p_dc);
    if (z == 0.0) {
        throw Error(ErrorKind::DegenerateConfig, "no shot survives post-selection at this configuration");
    }
    const ExactDistribution base =
        x_ind == 1.0 ? ideal_distribution(m, input) : partial_dist_distribution(m, input, x_ind);
    const auto survivors = push_loss(base, eta);

    std::map<OccupationPattern, double> mass;
    for (const auto &[kept, p] : survivors) {
        const int dark = n - kept.total();
        const double w = std::pow(p_dc, dark) * std::pow(1.0 - p_dc, static_cast<double>(modes) - dark);
        if (w == 0.0) {
            continue;
        }
        for_each_k_subset(modes, dark, [&](const std::vector<int> &mask) {
            OccupationPattern t = kept;
            for (std::size_t i = 0; i < modes; ++i) {
                t[i] += mask[i];
            }
            mass[t] += p * w;
        });
    }

    ExactDistribution dist;
    dist.patterns = enumerate_patterns(modes, n);
    dist.probs.reserve(dist.patterns.size());
    for (const auto &t : dist.patterns) {
        auto it = mass.find(t);
        dist.probs.push_back(it == mass.end() ? 0.0 : clamp_probability(it->second / z));
    }
    return dist;
}

ExactDistribution empirical_distribution(std::span<const OccupationPattern> samples) {
    if (samples.empty()) {
        throw Error(ErrorKind::EmptyInput, "no samples");
    }
    std::map<OccupationPattern, std::size_t> counts;
    for (const auto &s : samples) {
        ++counts[s];
    }
    ExactDistribution dist;
    // std::map iterates ascending; canonical order is the reverse.
    for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
        dist.patterns.push_back(it->first);
        dist.probs.push_back(static_cast<double>(it->second) / static_cast<double>(samples.size()));
    }
    return dist;
}

double tvd(const ExactDistribution &p, const ExactDistribution &q) {
    std::map<OccupationPattern, double> diff;
    for (std::size_t i = 0; i < p.patterns.size(); ++i) {
        diff[p.patterns[i]] += p.probs[i];
    }
    for (std::size_t i = 0; i < q.patterns.size(); ++i) {
        diff[q.patterns[i]] -= q.probs[i];
    }
    double total = 0.0;
    for (const auto &[pattern, d] : diff) {
        total += std::abs(d);
    }
    return 0.5 * total;
}

ExactDistribution sorted_background(const ExactDistribution &dist) {
    std::vector<std::size_t> order(dist.patterns.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dist.probs[a] != dist.probs[b]) {
            return dist.probs[a] > dist.probs[b];
        }
        return canonical_less(dist.patterns[a], dist.patterns[b]);
    });
    ExactDistribution out;
    out.patterns.reserve(order.size());
    out.probs.reserve(order.size());
    for (std::size_t i : order) {
        out.patterns.push_back(dist.patterns[i]);
        out.probs.push_back(dist.probs[i]);
    }
    return out;
}

void write_csv(std::ostream &out, const ExactDistribution &dist) {
    out << "pattern,prob\n";
    for (std::size_t i = 0; i < dist.patterns.size(); ++i) {
        out << dist.patterns[i].to_string() << ',' << format_double(dist.probs[i]) << '\n';
    }
}

nlohmann::ordered_json to_json(const ExactDistribution &dist) {
    nlohmann::ordered_json j;
    auto &patterns = j["patterns"] = nlohmann::ordered_json::array();
    for (const auto &p : dist.patterns) {
        patterns.push_back(p.to_string());
    }
    j["probs"] = dist.probs;
    return j;
}

ExactDistribution distribution_from_json(const nlohmann::json &j) {
    try {
        ExactDistribution dist;
        for (const auto &p : j.at("patterns")) {
            dist.patterns.push_back(OccupationPattern::parse(p.get<std::string>()));
        }
        dist.probs = j.at("probs").get<std::vector<double>>();
        if (dist.probs.size() != dist.patterns.size()) {
            throw Error(ErrorKind::InvalidDimension, "patterns and probs differ in length");
        }
        return dist;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Config, std::string("malformed distribution JSON: ") + e.what());
    }
}

}  // namespace bosonbench
