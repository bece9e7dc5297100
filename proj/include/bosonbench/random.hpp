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

#ifndef BOSONBENCH_RANDOM_HPP
#define BOSONBENCH_RANDOM_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace bosonbench {

using Seed = std::uint64_t;

std::uint64_t splitmix64(std::uint64_t &state);

/// Mixes a master seed with a list of integer keys (shot index, grid coordinates, ...)
/// into an independent substream seed. Pure function of its arguments.
Seed derive_seed(Seed master, std::initializer_list<std::uint64_t> keys);

/// xoshiro256** generator. All distribution sampling below is implemented
/// by hand so that streams are identical across standard libraries.
class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(Seed seed);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);

    bool bernoulli(double p);

    /// Standard normal via Box-Muller (no cached second variate).
    double normal();

    /// Index drawn with probability proportional to weights[i]. Weights must be
    /// non-negative with a positive sum.
    std::size_t discrete(std::span<const double> weights);

    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

   private:
    std::array<std::uint64_t, 4> s_;
};

}  // namespace bosonbench

#endif
