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

#ifndef BOSONBENCH_LINALG_HPP
#define BOSONBENCH_LINALG_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "bosonbench/pattern.hpp"
#include "bosonbench/random.hpp"

namespace bosonbench {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept {
        return rows_;
    }
    std::size_t cols() const noexcept {
        return cols_;
    }
    bool is_square() const noexcept {
        return rows_ == cols_;
    }

    Complex &operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    std::span<const Complex> entries() const noexcept {
        return entries_;
    }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// max_ij |(A A^dagger - I)_ij|. Requires a square matrix.
double unitarity_error(const ComplexMatrix &a);

/// max_ij |A_ij - B_ij|. Requires equal shapes.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

/// Haar-random m x m unitary: a standard complex Gaussian matrix is
/// orthonormalized column by column (modified Gram-Schmidt, two passes), which
/// is the QR factorization with a positive real diagonal in R.
ComplexMatrix haar_unitary(std::size_t m, Seed seed);

/// Largest dimension accepted by permanent().
inline constexpr std::size_t kMaxPermanentDim = 30;

/// Matrix permanent via Ryser's formula, visiting column subsets in binary
/// reflected Gray-code order (subset k = k ^ (k >> 1), k = 1 .. 2^n - 1) so
/// each step adds or removes one column from the running row sums. O(n 2^n).
/// The 0 x 0 permanent is 1.
Complex permanent(const ComplexMatrix &a);

/// Reference O(n! n) permanent by explicit permutation enumeration.
Complex permanent_naive(const ComplexMatrix &a);

/// n x n matrix M^{S,T}: column j of M repeated s_j times and row i repeated
/// t_i times. Columns are keyed by the input pattern, rows by the output.
ComplexMatrix submatrix(const ComplexMatrix &m, const OccupationPattern &input,
                        const OccupationPattern &output);

/// result(i, j) = conj(a(i, sigma[j])), sigma a 0-based permutation.
ComplexMatrix column_permute_conjugate(const ComplexMatrix &a, std::span<const std::size_t> sigma);

/// {"rows": r, "cols": c, "re": [...], "im": [...]} in row-major order.
nlohmann::json to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const nlohmann::json &j);

}  // namespace bosonbench

#endif
