// src/assignment.cc

// Copyright 2026  spklink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spklink/assignment.h"

#include <limits>

#include "spklink/common.h"

namespace spklink {

namespace {

// Minimum-cost assignment of every row to a distinct column, rows <= cols.
// 1-based arrays as in the classical O(rows^2 cols) formulation.
std::vector<int> MinCostRows(const std::vector<int64_t> &cost, int rows,
                             int cols) {
  const int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<int64_t> u(rows + 1, 0), v(cols + 1, 0), min_v(cols + 1);
  std::vector<int> match(cols + 1, 0), way(cols + 1, 0);
  std::vector<char> used(cols + 1);
  for (int i = 1; i <= rows; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(min_v.begin(), min_v.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        int64_t cur = cost[std::size_t(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
        if (cur < min_v[j]) {
          min_v[j] = cur;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(rows, -1);
  for (int j = 1; j <= cols; ++j)
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<int> MaxWeightAssignment(const std::vector<int64_t> &weights,
                                     int rows, int cols) {
  if (weights.size() != std::size_t(rows) * cols)
    throw DataError("assignment: weight matrix has the wrong size");
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);
  int64_t max_w = 0;
  for (int64_t w : weights) {
    if (w < 0) throw DataError("assignment: negative weight");
    max_w = std::max(max_w, w);
  }
  // Minimizing (max_w - w) over a full matching of the smaller side
  // maximizes total weight; zero-weight pairs are dropped afterwards.
  const bool transpose = rows > cols;
  const int r = transpose ? cols : rows, c = transpose ? rows : cols;
  std::vector<int64_t> cost(std::size_t(r) * c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      int64_t w = transpose ? weights[std::size_t(j) * cols + i]
                            : weights[std::size_t(i) * cols + j];
      cost[std::size_t(i) * c + j] = max_w - w;
    }
  std::vector<int> small = MinCostRows(cost, r, c);
  std::vector<int> out(rows, -1);
  for (int i = 0; i < r; ++i) {
    int j = small[i];
    if (j < 0) continue;
    int row = transpose ? j : i, col = transpose ? i : j;
    if (weights[std::size_t(row) * cols + col] > 0) out[row] = col;
  }
  return out;
}

}  // namespace spklink
