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

#include "bosonbench/pattern.hpp"

#include <charconv>
#include <numeric>

#include "bosonbench/error.hpp"

namespace bosonbench {

OccupationPattern::OccupationPattern(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
        if (c < 0) {
            throw Error(ErrorKind::Range, "occupation counts must be non-negative");
        }
    }
}

OccupationPattern::OccupationPattern(std::initializer_list<int> counts)
    : OccupationPattern(std::vector<int>(counts)) {}

OccupationPattern OccupationPattern::from_modes(std::size_t modes,
                                                const std::vector<std::size_t> &occupied) {
    OccupationPattern p(modes);
    for (std::size_t j : occupied) {
        if (j >= modes) {
            throw Error(ErrorKind::InvalidDimension, "occupied mode index out of range");
        }
        ++p.counts_[j];
    }
    return p;
}

int OccupationPattern::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), 0);
}

bool OccupationPattern::collision_free() const noexcept {
    for (int c : counts_) {
        if (c > 1) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> OccupationPattern::photon_modes() const {
    std::vector<std::size_t> modes;
    for (std::size_t j = 0; j < counts_.size(); ++j) {
        for (int k = 0; k < counts_[j]; ++k) {
            modes.push_back(j);
        }
    }
    return modes;
}

std::string OccupationPattern::to_string() const {
    std::string out;
    for (std::size_t j = 0; j < counts_.size(); ++j) {
        if (j > 0) {
            out += ':';
        }
        out += std::to_string(counts_[j]);
    }
    return out;
}

OccupationPattern OccupationPattern::parse(std::string_view text) {
    std::vector<int> counts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(':', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        int value = 0;
        auto field = text.substr(pos, end - pos);
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
            throw Error(ErrorKind::Config, "malformed pattern '" + std::string(text) + "'");
        }
        counts.push_back(value);
        pos = end + 1;
    }
    return OccupationPattern(std::move(counts));
}

}  // namespace bosonbench
