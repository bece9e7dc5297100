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

#include "bosonbench/noise.hpp"

#include <string>

#include "bosonbench/error.hpp"
#include "bosonbench/format.hpp"

namespace bosonbench {

void check_x_ind(double x_ind) {
    if (!(x_ind >= 0.0 && x_ind <= 1.0)) {
        throw Error(ErrorKind::Range, "x_ind must lie in [0, 1], got " + format_double(x_ind));
    }
}

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorKind::Range, "eta must lie in [0, 1], got " + format_double(eta));
    }
}

void check_p_dc(double p_dc) {
    if (!(p_dc >= 0.0 && p_dc < 1.0)) {
        throw Error(ErrorKind::Range, "p_dc must lie in [0, 1), got " + format_double(p_dc));
    }
}

void NoiseConfig::validate() const {
    check_x_ind(x_ind);
    check_eta(eta);
    check_p_dc(p_dc);
}

nlohmann::ordered_json to_json(const NoiseConfig &c) {
    nlohmann::ordered_json j;
    j["x_ind"] = c.x_ind;
    j["eta"] = c.eta;
    j["p_dc"] = c.p_dc;
    return j;
}

}  // namespace bosonbench
