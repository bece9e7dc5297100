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

#ifndef BOSONBENCH_PATTERN_HPP
#define BOSONBENCH_PATTERN_HPP

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace bosonbench {

/// Photon counts per mode, a Fock occupation |s_1, ..., s_m>.
///
/// The ordering operator is plain lexicographic on the count vector. The
/// toolkit's canonical listing order (enumerate_patterns, tie-breaks) is the
/// reverse of it, so (2,0) comes before (1,1) before (0,2); see canonical_less.
class OccupationPattern {
   public:
    OccupationPattern() = default;
    explicit OccupationPattern(std::size_t modes) : counts_(modes, 0) {}
    explicit OccupationPattern(std::vector<int> counts);
    OccupationPattern(std::initializer_list<int> counts);

    /// Pattern with one photon in each listed mode (0-based).
    static OccupationPattern from_modes(std::size_t modes, const std::vector<std::size_t> &occupied);

    std::size_t size() const noexcept {
        return counts_.size();
    }
    int total() const noexcept;
    bool collision_free() const noexcept;

    int operator[](std::size_t i) const {
        return counts_[i];
    }
    int &operator[](std::size_t i) {
        return counts_[i];
    }
    const std::vector<int> &counts() const noexcept {
        return counts_;
    }

    /// Mode index of each photon, ascending: (0,2,1) -> {1,1,2}.
    std::vector<std::size_t> photon_modes() const;

    /// Colon-separated counts, e.g. "2:0:1:0".
    std::string to_string() const;
    static OccupationPattern parse(std::string_view text);

    friend auto operator<=>(const OccupationPattern &, const OccupationPattern &) = default;
    friend bool operator==(const OccupationPattern &, const OccupationPattern &) = default;

   private:
    std::vector<int> counts_;
};

/// Canonical listing order: descending lexicographic.
inline bool canonical_less(const OccupationPattern &a, const OccupationPattern &b) {
    return b < a;
}

}  // namespace bosonbench

#endif
