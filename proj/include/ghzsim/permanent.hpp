/*
 * Copyright 2026 The ghzsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ghzsim/error.hpp"

namespace ghzsim {

/// Dense row-major matrix. Only what the permanent and Gram-matrix code needs.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw InvalidParameter("Matrix: data size does not match shape");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

// Sum over all permutations; used for n <= 4 where it beats Ryser.
template <typename T>
T permanent_enumerate(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  T total{0};
  do {
    T prod{1};
    for (std::size_t i = 0; i < n; ++i) prod *= m(i, perm[i]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Ryser inclusion-exclusion with Gray-code column subsets:
// perm(M) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} M[i][j].
template <typename T>
T permanent_ryser(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  std::vector<T> row_sums(n, T{0});
  T total{0};
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t flipped = next ^ gray;
    const auto col = static_cast<std::size_t>(std::countr_zero(flipped));
    const bool added = (next & flipped) != 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (added) {
        row_sums[i] += m(i, col);
      } else {
        row_sums[i] -= m(i, col);
      }
    }
    gray = next;
    T prod{1};
    for (std::size_t i = 0; i < n; ++i) prod *= row_sums[i];
    const bool odd = (std::popcount(gray) & 1) != 0;
    total += odd ? -prod : prod;
  }
  return (n % 2 == 0) ? total : -total;
}

}  // namespace detail

/// Matrix permanent, perm(M) = sum over permutations s of prod_i M[i][s(i)].
/// The empty matrix has permanent 1.
template <typename T>
T permanent(const Matrix<T>& m) {
  if (!m.square()) throw InvalidParameter("permanent: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return T{1};
  if (n > 62) throw InvalidParameter("permanent: matrix too large");
  if (n <= 4) return detail::permanent_enumerate(m);
  return detail::permanent_ryser(m);
}

}  // namespace ghzsim
