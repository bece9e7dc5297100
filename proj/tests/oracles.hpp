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

#ifndef BOSONBENCH_TESTS_ORACLES_HPP
#define BOSONBENCH_TESTS_ORACLES_HPP

// Slow reference implementations used only by the tests. None of them call
// the library routine they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "bosonbench/distributions.hpp"
#include "bosonbench/linalg.hpp"
#include "bosonbench/pattern.hpp"

namespace oracle {

using bosonbench::Complex;
using bosonbench::ComplexMatrix;
using bosonbench::OccupationPattern;
using Law = std::map<OccupationPattern, double>;

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937_64 &gen) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = Complex(g(gen), g(gen));
        }
    }
    return a;
}

/// Laplace expansion along the first row.
inline Complex laplace_permanent(const ComplexMatrix &a) {
    const std::size_t n = a.rows();
    if (n == 0) {
        return 1.0;
    }
    if (n == 1) {
        return a(0, 0);
    }
    Complex total = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        ComplexMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 0, k = 0; j < n; ++j) {
                if (j != c) minor(i - 1, k++) = a(i, j);
            }
        }
        total += a(0, c) * laplace_permanent(minor);
    }
    return total;
}

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

inline double factorial_product(const OccupationPattern &p) {
    double f = 1.0;
    for (int c : p.counts()) f *= factorial(c);
    return f;
}

/// Rows picked from the output, columns from the input.
inline ComplexMatrix select(const ComplexMatrix &m, const OccupationPattern &s, const OccupationPattern &t) {
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (int k = 0; k < t[i]; ++k) rows.push_back(i);
    for (std::size_t j = 0; j < s.size(); ++j)
        for (int k = 0; k < s[j]; ++k) cols.push_back(j);
    ComplexMatrix a(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) a(i, j) = m(rows[i], cols[j]);
    return a;
}

/// All length-m patterns with total n, any order.
inline std::vector<OccupationPattern> patterns(std::size_t m, int n) {
    std::vector<OccupationPattern> out;
    std::vector<int> c(m, 0);
    auto rec = [&](auto &&self, std::size_t i, int left) -> void {
        if (i + 1 == m) {
            c[i] = left;
            out.emplace_back(c);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            c[i] = k;
            self(self, i + 1, left - k);
        }
    };
    if (m > 0) rec(rec, 0, n);
    return out;
}

inline Law ideal(const ComplexMatrix &m, const OccupationPattern &s) {
    Law law;
    for (const auto &t : patterns(m.rows(), s.total())) {
        law[t] = std::norm(laplace_permanent(select(m, s, t))) / (factorial_product(s) * factorial_product(t));
    }
    return law;
}

/// Classical transmission of distinguishable photons: independent routing.
inline Law classical(const ComplexMatrix &m, const std::vector<std::size_t> &inputs) {
    Law law;
    law[OccupationPattern(m.rows())] = 1.0;
    for (std::size_t s : inputs) {
        Law next;
        for (const auto &[t, p] : law) {
            for (std::size_t j = 0; j < m.rows(); ++j) {
                OccupationPattern u = t;
                ++u[j];
                next[u] += p * std::norm(m(j, s));
            }
        }
        law = std::move(next);
    }
    return law;
}

inline Law convolve(const Law &a, const Law &b) {
    Law out;
    for (const auto &[ta, pa] : a) {
        for (const auto &[tb, pb] : b) {
            std::vector<int> c = ta.counts();
            for (std::size_t i = 0; i < c.size(); ++i) c[i] += tb[i];
            out[OccupationPattern(c)] += pa * pb;
        }
    }
    return out;
}

/// Exact law of the per-photon mixture: every photon is coherent with
/// probability x, coherent photons interfere, the rest route classically.
inline Law partial_mixture(const ComplexMatrix &m, const OccupationPattern &s, double x) {
    const auto modes = s.photon_modes();
    const std::size_t n = modes.size();
    Law law;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::vector<std::size_t> coherent, distinguished;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? coherent : distinguished).push_back(modes[i]);
        const double w = std::pow(x, static_cast<double>(coherent.size())) *
                         std::pow(1.0 - x, static_cast<double>(distinguished.size()));
        if (w == 0.0) continue;
        std::vector<int> sc(m.rows(), 0);
        for (std::size_t c : coherent) sc[c] = 1;
        const Law part = convolve(ideal(m, OccupationPattern(sc)), classical(m, distinguished));
        for (const auto &[t, p] : part) law[t] += w * p;
    }
    return law;
}

/// Binomial thinning of every count.
inline Law lose(const Law &in, double eta) {
    Law out;
    for (const auto &[t, p] : in) {
        Law partial;
        partial[OccupationPattern(t.size())] = p;
        for (std::size_t i = 0; i < t.size(); ++i) {
            Law next;
            for (const auto &[u, q] : partial) {
                for (int k = 0; k <= t[i]; ++k) {
                    OccupationPattern v = u;
                    v[i] = k;
                    next[v] += q * binomial(t[i], k) * std::pow(eta, k) * std::pow(1.0 - eta, t[i] - k);
                }
            }
            partial = std::move(next);
        }
        for (const auto &[u, q] : partial) out[u] += q;
    }
    return out;
}

/// Each mode gains one count with probability p, mode by mode.
inline Law darken(const Law &in, double p) {
    Law out = in;
    const std::size_t m = in.empty() ? 0 : in.begin()->first.size();
    for (std::size_t i = 0; i < m; ++i) {
        Law next;
        for (const auto &[t, q] : out) {
            next[t] += q * (1.0 - p);
            OccupationPattern u = t;
            ++u[i];
            next[u] += q * p;
        }
        out = std::move(next);
    }
    return out;
}

/// Keeps patterns with total n and renormalizes numerically.
inline Law postselect(const Law &in, int n) {
    Law out;
    double z = 0.0;
    for (const auto &[t, p] : in) {
        if (t.total() == n) {
            out[t] = p;
            z += p;
        }
    }
    for (auto &[t, p] : out) p /= z;
    return out;
}

inline double tvd(const Law &a, const Law &b) {
    std::map<OccupationPattern, double> diff = a;
    for (const auto &[t, p] : b) diff[t] -= p;
    double s = 0.0;
    for (const auto &[t, d] : diff) s += std::abs(d);
    return 0.5 * s;
}

inline Law to_law(const bosonbench::ExactDistribution &d) {
    Law law;
    for (std::size_t i = 0; i < d.patterns.size(); ++i) law[d.patterns[i]] += d.probs[i];
    return law;
}

inline Law frequencies(const std::vector<OccupationPattern> &samples) {
    Law law;
    for (const auto &t : samples) law[t] += 1.0;
    for (auto &[t, p] : law) p /= static_cast<double>(samples.size());
    return law;
}

/// E[prod_{i in modes} n_i] under a law.
inline double moment(const Law &law, const std::vector<std::size_t> &modes) {
    double s = 0.0;
    for (const auto &[t, p] : law) {
        double prod = 1.0;
        for (std::size_t i : modes) prod *= t[i];
        s += p * prod;
    }
    return s;
}

/// Joint cumulant by the moment recursion
/// mu(S) = sum over B containing the first element of S of kappa(B) mu(S \ B).
inline double cumulant(const Law &law, const std::vector<std::size_t> &modes) {
    const std::size_t k = modes.size();
    std::map<std::uint64_t, double> kappa;
    auto subset = [&](std::uint64_t mask) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1) out.push_back(modes[i]);
        return out;
    };
    // Masks in increasing order; every proper sub-mask is visited first.
    for (std::uint64_t mask = 1; mask < (1ULL << k); ++mask) {
        const std::uint64_t low = mask & (~mask + 1);
        const std::uint64_t rest = mask ^ low;
        double value = moment(law, subset(mask));
        for (std::uint64_t sub = rest; sub != 0; sub = (sub - 1) & rest) {
            const std::uint64_t block = low | (rest ^ sub);
            if (block == mask) continue;
            value -= kappa[block] * moment(law, subset(mask ^ block));
        }
        kappa[mask] = value;
    }
    return kappa[(1ULL << k) - 1];
}

}  // namespace oracle

#endif
