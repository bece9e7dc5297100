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

#ifndef BOSONBENCH_ERROR_HPP
#define BOSONBENCH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace bosonbench {

enum class ErrorKind {
    InvalidDimension,
    PhotonNumber,
    InvalidPermutation,
    TooLarge,
    UnsupportedInput,
    Range,
    DegenerateConfig,
    DegenerateInput,
    InfeasiblePostSelection,
    NearZeroDenominator,
    EmptyInput,
    InternalConsistency,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the toolkit. The kind decides the CLI exit code.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message);

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

/// Raised by gamma() when the comparison sum is too close to zero. Carries both sums.
class NearZeroDenominatorError : public Error {
   public:
    NearZeroDenominatorError(double test_sum, double comp_sum);

    double test_sum;
    double comp_sum;
};

}  // namespace bosonbench

#endif
