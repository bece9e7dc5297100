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

#include "bosonbench/error.hpp"

namespace bosonbench {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidDimension:
            return "invalid-dimension";
        case ErrorKind::PhotonNumber:
            return "photon-number";
        case ErrorKind::InvalidPermutation:
            return "invalid-permutation";
        case ErrorKind::TooLarge:
            return "too-large";
        case ErrorKind::UnsupportedInput:
            return "unsupported-input";
        case ErrorKind::Range:
            return "range";
        case ErrorKind::DegenerateConfig:
            return "degenerate-config";
        case ErrorKind::DegenerateInput:
            return "degenerate-input";
        case ErrorKind::InfeasiblePostSelection:
            return "infeasible-post-selection";
        case ErrorKind::NearZeroDenominator:
            return "near-zero-denominator";
        case ErrorKind::EmptyInput:
            return "empty-input";
        case ErrorKind::InternalConsistency:
            return "internal-consistency";
        case ErrorKind::Config:
            return "config";
        case ErrorKind::Io:
            return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

NearZeroDenominatorError::NearZeroDenominatorError(double test_sum, double comp_sum)
    : Error(ErrorKind::NearZeroDenominator,
            "comparison correlator sum " + std::to_string(comp_sum) + " is below the floor (test sum " +
                std::to_string(test_sum) + ")"),
      test_sum(test_sum),
      comp_sum(comp_sum) {}

}  // namespace bosonbench
