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

#ifndef BOSONBENCH_NOISE_HPP
#define BOSONBENCH_NOISE_HPP

#include "json.hpp"

namespace bosonbench {

/// The three noise channels: photon indistinguishability x_ind in [0,1],
/// per-mode transmission eta in [0,1] and per-detector dark-count
/// probability p_dc in [0,1).
struct NoiseConfig {
    double x_ind = 1.0;
    double eta = 1.0;
    double p_dc = 0.0;

    /// Throws a range error when a field is outside its interval.
    void validate() const;

    bool noiseless() const noexcept {
        return x_ind == 1.0 && eta == 1.0 && p_dc == 0.0;
    }

    static NoiseConfig distinguishability(double x_ind) {
        return NoiseConfig{x_ind, 1.0, 0.0};
    }

    /// Coupled loss/dark-count setting 1 - eta = p_dc = p_noise.
    static NoiseConfig coupled(double p_noise) {
        return NoiseConfig{1.0, 1.0 - p_noise, p_noise};
    }

    friend bool operator==(const NoiseConfig &, const NoiseConfig &) = default;
};

void check_x_ind(double x_ind);
void check_eta(double eta);
void check_p_dc(double p_dc);

nlohmann::ordered_json to_json(const NoiseConfig &c);

}  // namespace bosonbench

#endif
