// include/spklink/fast_scorer.h

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

#ifndef SPKLINK_FAST_SCORER_H_
#define SPKLINK_FAST_SCORER_H_

#include <Eigen/Dense>

#include "spklink/plda.h"

namespace spklink {

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// The PLDA log-likelihood ratio reduced to a quadratic form:
//   llr(x1, x2) = x1' S x1 + x2' S x2 + 2 x1' C x2 + c
// with S = self_term, C = cross_term, c = constant.
//
// With T = between + within and R = T - between T^-1 between, block inversion
// of the joint covariance [[T, B], [B, T]] gives
//   S = (T^-1 - R^-1) / 2,  C = T^-1 B R^-1 / 2,
//   c = (log|T| - log|R|) / 2.
struct FastScorer {
  Eigen::MatrixXd self_term;
  Eigen::MatrixXd cross_term;
  double constant = 0.0;

  int Dim() const { return static_cast<int>(self_term.rows()); }
  double Score(const Eigen::VectorXd &x1, const Eigen::VectorXd &x2) const;
};

// Throws NumericError if T or R is not positive definite.
FastScorer PrepareScorer(const PldaModel &model);

// Per-row quantities shared by all pairs involving a row: the self term
// x' S x and the projection x' C.
struct ScorerRows {
  RowMatrixXd projected;   // n x D, row i = x_i' C
  Eigen::VectorXd self;    // n, x_i' S x_i
};

ScorerRows ProjectRows(const FastScorer &scorer, const RowMatrixXd &x);

// Final combination of the pieces of a pair score. Both the OpenMP kernel
// and the serial reference go through this so their results match bit for
// bit.
inline double CombineScore(double self_a, double self_b, double cross_dot,
                           double constant) {
  return ((self_a + self_b) + 2.0 * cross_dot) + constant;
}

// out(i, j) = llr(rows_a_i, y_j), for rows a_begin..a_end of `a` against
// rows b_begin..b_end of `b`. `b_rows` holds the raw y vectors (n x D).
// OpenMP-parallel over row groups; each pair's dot product is accumulated
// sequentially over the dimension so the result does not depend on tiling
// or thread count.
void ScoreTile(const ScorerRows &a, const RowMatrixXd &b_rows,
               const Eigen::VectorXd &b_self, double constant,
               Eigen::Index a_begin, Eigen::Index a_end, Eigen::Index b_begin,
               Eigen::Index b_end, double *out, Eigen::Index ld,
               bool parallel = true);

// Plain triple loop with the same arithmetic as ScoreTile.
void ScoreTileReference(const ScorerRows &a, const RowMatrixXd &b_rows,
                        const Eigen::VectorXd &b_self, double constant,
                        Eigen::Index a_begin, Eigen::Index a_end,
                        Eigen::Index b_begin, Eigen::Index b_end, double *out,
                        Eigen::Index ld);

// n x m matrix of llr(X_i, Y_j).
Eigen::MatrixXd ScoreBlock(const FastScorer &scorer, const RowMatrixXd &x,
                           const RowMatrixXd &y);
Eigen::MatrixXd ScoreBlockReference(const FastScorer &scorer,
                                    const RowMatrixXd &x,
                                    const RowMatrixXd &y);

}  // namespace spklink

#endif  // SPKLINK_FAST_SCORER_H_
