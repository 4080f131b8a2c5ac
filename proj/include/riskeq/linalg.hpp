// Copyright 2026 The riskeq Authors
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

#pragma once

#include <optional>
#include <vector>

#include "riskeq/scalar.hpp"

namespace riskeq::linalg {

using Matrix = std::vector<std::vector<Scalar>>;

inline bool near_zero(const Scalar& x, double tol) {
  return x.is_exact() ? x.is_zero() : std::abs(x.to_double()) <= tol;
}

// Reduced row echelon form of [A | b].
struct Echelon {
  bool consistent = true;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
  Matrix rows;                      // rank rows of length cols + 1
};

inline Echelon rref(Matrix a, std::vector<Scalar> b, double tol = kDefaultTol) {
  const std::size_t r = a.size();
  const std::size_t c = r ? a[0].size() : 0;
  for (std::size_t i = 0; i < r; ++i) a[i].push_back(b[i]);
  Echelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < c && row < r; ++col) {
    std::size_t best = r;
    for (std::size_t i = row; i < r; ++i) {
      if (near_zero(a[i][col], tol)) continue;
      if (best == r || abs(a[i][col]) > abs(a[best][col])) best = i;
      if (a[i][col].is_exact()) break;
    }
    if (best == r) continue;
    std::swap(a[row], a[best]);
    Scalar piv = a[row][col];
    for (auto& v : a[row]) v /= piv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      Scalar factor = a[i][col];
      for (std::size_t k = col; k <= c; ++k) a[i][k] -= factor * a[row][k];
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.rank = row;
  for (std::size_t i = row; i < r; ++i)
    if (!near_zero(a[i][c], tol)) out.consistent = false;
  a.resize(row);
  out.rows = std::move(a);
  return out;
}

// Solves the square system M x = rhs; nullopt when singular.
inline std::optional<std::vector<Scalar>> solve_square(const Matrix& m, const std::vector<Scalar>& rhs,
                                                       double tol = kDefaultTol) {
  Echelon e = rref(m, rhs, tol);
  const std::size_t n = rhs.size();
  if (!e.consistent || e.rank != n) return std::nullopt;
  std::vector<Scalar> x(n);
  for (std::size_t i = 0; i < n; ++i) x[e.pivots[i]] = e.rows[i][n];
  return x;
}

// Basic feasible solutions of {x : A x = b, x >= 0}, at most `cap` of them.
// Bases are tried in lexicographic order of column subsets.
inline std::vector<std::vector<Scalar>> feasible_vertices(const Echelon& e, std::size_t cols,
                                                          std::size_t cap, double tol = kDefaultTol) {
  std::vector<std::vector<Scalar>> out;
  if (!e.consistent) return out;
  const std::size_t k = e.rank;
  const Mode mode = e.rows.empty() ? Mode::kExact : e.rows[0][cols].mode();
  if (k == 0) {
    out.emplace_back(cols, Scalar::zero(mode));
    return out;
  }
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (out.size() < cap) {
    Matrix sub(k, std::vector<Scalar>(k));
    std::vector<Scalar> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) sub[i][j] = e.rows[i][pick[j]];
      rhs[i] = e.rows[i][cols];
    }
    if (auto xb = solve_square(sub, rhs, tol)) {
      bool feasible = true;
      for (const auto& v : *xb)
        if (definitely_less(v, Scalar::zero(mode), tol)) feasible = false;
      if (feasible) {
        std::vector<Scalar> x(cols, Scalar::zero(mode));
        for (std::size_t j = 0; j < k; ++j) x[pick[j]] = (*xb)[j];
        bool dup = false;
        for (const auto& y : out) {
          bool same = true;
          for (std::size_t j = 0; j < cols && same; ++j)
            same = approx_equal(x[j], y[j], tol);
          if (same) dup = true;
        }
        if (!dup) out.push_back(std::move(x));
      }
    }
    // next combination
    std::size_t i = k;
    while (i-- > 0) {
      if (pick[i] < cols - k + i) {
        ++pick[i];
        for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace riskeq::linalg
