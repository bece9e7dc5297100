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

#include "bosonbench/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "bosonbench/error.hpp"

namespace bosonbench {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
        throw Error(ErrorKind::InvalidDimension, "entry count " + std::to_string(entries_.size()) +
                                                     " does not match " + std::to_string(rows) + "x" +
                                                     std::to_string(cols));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix id(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        id(i, i) = 1.0;
    }
    return id;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols_ != b.rows_) {
        throw Error(ErrorKind::InvalidDimension, "matrix product shape mismatch");
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols_; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

double unitarity_error(const ComplexMatrix &a) {
    if (!a.is_square()) {
        throw Error(ErrorKind::InvalidDimension, "unitarity check needs a square matrix");
    }
    return max_abs_diff(a * a.adjoint(), ComplexMatrix::identity(a.rows()));
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::InvalidDimension, "shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return worst;
}

ComplexMatrix haar_unitary(std::size_t m, Seed seed) {
    if (m == 0) {
        throw Error(ErrorKind::InvalidDimension, "haar_unitary needs m >= 1");
    }
    Rng rng(seed);
    // Columns stored contiguously while orthonormalizing.
    std::vector<std::vector<Complex>> cols(m, std::vector<Complex>(m));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            cols[c][r] = Complex(re, im) * std::sqrt(0.5);
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        auto &v = cols[c];
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < c; ++p) {
                Complex proj{};
                for (std::size_t r = 0; r < m; ++r) {
                    proj += std::conj(cols[p][r]) * v[r];
                }
                for (std::size_t r = 0; r < m; ++r) {
                    v[r] -= proj * cols[p][r];
                }
            }
        }
        double norm = 0.0;
        for (const Complex &z : v) {
            norm += std::norm(z);
        }
        norm = std::sqrt(norm);
        // Gram-Schmidt yields R with a positive real diagonal, which is the
        // phase fixing that makes Q Haar distributed.
        for (Complex &z : v) {
            z /= norm;
        }
    }
    ComplexMatrix u(m, m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            u(r, c) = cols[c][r];
        }
    }
    return u;
}

Complex permanent(const ComplexMatrix &a) {
    if (!a.is_square()) {
        throw Error(ErrorKind::InvalidDimension, "permanent needs a square matrix");
    }
    const std::size_t n = a.rows();
    if (n == 0) {
        return 1.0;
    }
    if (n > kMaxPermanentDim) {
        throw Error(ErrorKind::TooLarge, "permanent dimension " + std::to_string(n) + " exceeds " +
                                             std::to_string(kMaxPermanentDim));
    }
    if (n == 1) {
        return a(0, 0);
    }

    std::vector<Complex> row_sums(n);
    Complex total{};
    std::uint64_t gray = 0;
    const std::uint64_t steps = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < steps; ++k) {
        const int col = std::countr_zero(k);
        const std::uint64_t bit = std::uint64_t{1} << col;
        gray ^= bit;
        if (gray & bit) {
            for (std::size_t i = 0; i < n; ++i) {
                row_sums[i] += a(i, col);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                row_sums[i] -= a(i, col);
            }
        }
        Complex prod = row_sums[0];
        for (std::size_t i = 1; i < n; ++i) {
            prod *= row_sums[i];
        }
        if (std::popcount(gray) & 1) {
            total -= prod;
        } else {
            total += prod;
        }
    }
    return (n & 1) ? -total : total;
}

Complex permanent_naive(const ComplexMatrix &a) {
    if (!a.is_square()) {
        throw Error(ErrorKind::InvalidDimension, "permanent needs a square matrix");
    }
    const std::size_t n = a.rows();
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    Complex total{};
    do {
        Complex prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            prod *= a(i, sigma[i]);
        }
        total += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

ComplexMatrix submatrix(const ComplexMatrix &m, const OccupationPattern &input,
                        const OccupationPattern &output) {
    if (input.size() != m.cols() || output.size() != m.rows()) {
        throw Error(ErrorKind::InvalidDimension, "pattern length does not match the matrix");
    }
    if (input.total() != output.total()) {
        throw Error(ErrorKind::PhotonNumber, "input carries " + std::to_string(input.total()) +
                                                 " photons, output " + std::to_string(output.total()));
    }
    const auto cols = input.photon_modes();
    const auto rows = output.photon_modes();
    ComplexMatrix sub(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            sub(i, j) = m(rows[i], cols[j]);
        }
    }
    return sub;
}

ComplexMatrix column_permute_conjugate(const ComplexMatrix &a, std::span<const std::size_t> sigma) {
    if (!a.is_square()) {
        throw Error(ErrorKind::InvalidDimension, "column_permute_conjugate needs a square matrix");
    }
    const std::size_t n = a.cols();
    if (sigma.size() != n) {
        throw Error(ErrorKind::InvalidPermutation, "permutation length does not match the matrix");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t s : sigma) {
        if (s >= n || seen[s]) {
            throw Error(ErrorKind::InvalidPermutation, "sigma is not a permutation of 0..n-1");
        }
        seen[s] = true;
    }
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = std::conj(a(i, sigma[j]));
        }
    }
    return out;
}

nlohmann::json to_json(const ComplexMatrix &m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (const Complex &z : m.entries()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

ComplexMatrix matrix_from_json(const nlohmann::json &j) {
    try {
        const auto rows = j.at("rows").get<std::size_t>();
        const auto cols = j.at("cols").get<std::size_t>();
        const auto re = j.at("re").get<std::vector<double>>();
        const auto im = j.at("im").get<std::vector<double>>();
        if (re.size() != im.size()) {
            throw Error(ErrorKind::InvalidDimension, "re and im arrays differ in length");
        }
        std::vector<Complex> entries(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) {
            entries[i] = Complex(re[i], im[i]);
        }
        return ComplexMatrix(rows, cols, std::move(entries));
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::Config, std::string("malformed matrix JSON: ") + e.what());
    }
}

}  // namespace bosonbench
