// src/fast_scorer.cc

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

#include "spklink/fast_scorer.h"

#include <algorithm>
#include <vector>

#include "spklink/common.h"

// This file is compiled with -ffp-contract=off: the tile kernel and the
// reference loop must round identically.

namespace spklink {

namespace {

constexpr Eigen::Index kPanel = 8;  // columns per packed panel
constexpr Eigen::Index kRows = 4;   // rows per register block

Eigen::VectorXd SelfTerms(const FastScorer &scorer, const RowMatrixXd &x) {
  RowMatrixXd xs = x * scorer.self_term;
  return xs.cwiseProduct(x).rowwise().sum();
}

// acc[r][l] = sum_k a_r[k] * panel[k][l], k ascending.
template <int R>
void PanelKernel(const double *const *a_rows, const double *panel,
                 Eigen::Index dim, double (*acc)[kPanel]) {
  for (int r = 0; r < R; ++r)
    for (Eigen::Index l = 0; l < kPanel; ++l) acc[r][l] = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double *pk = panel + k * kPanel;
    for (int r = 0; r < R; ++r) {
      const double x = a_rows[r][k];
      for (Eigen::Index l = 0; l < kPanel; ++l) acc[r][l] += x * pk[l];
    }
  }
}

void CheckTileArgs(const ScorerRows &a, const RowMatrixXd &b_rows,
                   const Eigen::VectorXd &b_self, Eigen::Index a_begin,
                   Eigen::Index a_end, Eigen::Index b_begin,
                   Eigen::Index b_end) {
  if (a.projected.cols() != b_rows.cols())
    throw DataError("score tile: dimension mismatch (" +
                    std::to_string(a.projected.cols()) + " vs " +
                    std::to_string(b_rows.cols()) + ")");
  if (a_begin < 0 || a_end > a.projected.rows() || a_begin > a_end ||
      b_begin < 0 || b_end > b_rows.rows() || b_begin > b_end ||
      b_self.size() != b_rows.rows())
    throw DataError("score tile: range out of bounds");
}

}  // namespace

double FastScorer::Score(const Eigen::VectorXd &x1,
                         const Eigen::VectorXd &x2) const {
  if (x1.size() != Dim() || x2.size() != Dim())
    throw DataError("FastScorer::Score: dimension mismatch");
  return CombineScore(x1.dot(self_term * x1), x2.dot(self_term * x2),
                      x1.dot(cross_term * x2), constant);
}

FastScorer PrepareScorer(const PldaModel &model) {
  const int dim = model.Dim();
  const Eigen::MatrixXd &b = model.between;
  Eigen::MatrixXd total = b + model.within;
  Eigen::LLT<Eigen::MatrixXd> total_llt(total);
  if (total_llt.info() != Eigen::Success)
    throw NumericError("total covariance is not positive definite");
  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd total_inv = total_llt.solve(identity);
  total_inv = 0.5 * (total_inv + total_inv.transpose()).eval();
  // Schur complement of the joint covariance: R = T - B T^-1 B.
  Eigen::MatrixXd schur = total - b * total_llt.solve(b);
  schur = 0.5 * (schur + schur.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> schur_llt(schur);
  if (schur_llt.info() != Eigen::Success)
    throw NumericError("conditional covariance is not positive definite");
  Eigen::MatrixXd schur_inv = schur_llt.solve(identity);
  schur_inv = 0.5 * (schur_inv + schur_inv.transpose()).eval();

  FastScorer scorer;
  scorer.self_term = 0.5 * (total_inv - schur_inv);
  Eigen::MatrixXd cross = 0.5 * total_inv * b * schur_inv;
  scorer.cross_term = 0.5 * (cross + cross.transpose());
  double logdet_total =
      2.0 * total_llt.matrixLLT().diagonal().array().log().sum();
  double logdet_schur =
      2.0 * schur_llt.matrixLLT().diagonal().array().log().sum();
  scorer.constant = 0.5 * (logdet_total - logdet_schur);
  // Scores are taken relative to the model mean; fold a non-zero mean into
  // the caller's preprocessing instead of carrying it here.
  if (model.mu.size() == dim && model.mu.squaredNorm() > 0.0)
    SPKLINK_WARN << "model mean is non-zero; FastScorer assumes centered input";
  return scorer;
}

ScorerRows ProjectRows(const FastScorer &scorer, const RowMatrixXd &x) {
  if (x.cols() != scorer.Dim())
    throw DataError("ProjectRows: dimension mismatch");
  ScorerRows rows;
  rows.projected = x * scorer.cross_term;
  rows.self = SelfTerms(scorer, x);
  return rows;
}

void ScoreTile(const ScorerRows &a, const RowMatrixXd &b_rows,
               const Eigen::VectorXd &b_self, double constant,
               Eigen::Index a_begin, Eigen::Index a_end, Eigen::Index b_begin,
               Eigen::Index b_end, double *out, Eigen::Index ld,
               bool parallel) {
  CheckTileArgs(a, b_rows, b_self, a_begin, a_end, b_begin, b_end);
  const Eigen::Index dim = b_rows.cols();
  const Eigen::Index cols = b_end - b_begin;
  const Eigen::Index num_panels = (cols + kPanel - 1) / kPanel;
  if (cols == 0 || a_end == a_begin) return;

  // Panel p holds columns b_begin + 8p .. +7, stored k-major; the padding
  // lanes are zero and never written out.
  std::vector<double> packed(num_panels * dim * kPanel, 0.0);
  for (Eigen::Index p = 0; p < num_panels; ++p) {
    double *dst = packed.data() + p * dim * kPanel;
    Eigen::Index width = std::min(kPanel, cols - p * kPanel);
    for (Eigen::Index l = 0; l < width; ++l) {
      const double *src = b_rows.row(b_begin + p * kPanel + l).data();
      for (Eigen::Index k = 0; k < dim; ++k) dst[k * kPanel + l] = src[k];
    }
  }

  const Eigen::Index num_groups = (a_end - a_begin + kRows - 1) / kRows;
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (Eigen::Index g = 0; g < num_groups; ++g) {
    const Eigen::Index r0 = a_begin + g * kRows;
    const int rows = static_cast<int>(std::min(kRows, a_end - r0));
    const double *a_rows[kRows];
    for (int r = 0; r < rows; ++r) a_rows[r] = a.projected.row(r0 + r).data();
    double acc[kRows][kPanel];
    for (Eigen::Index p = 0; p < num_panels; ++p) {
      const double *panel = packed.data() + p * dim * kPanel;
      switch (rows) {
        case 4: PanelKernel<4>(a_rows, panel, dim, acc); break;
        case 3: PanelKernel<3>(a_rows, panel, dim, acc); break;
        case 2: PanelKernel<2>(a_rows, panel, dim, acc); break;
        default: PanelKernel<1>(a_rows, panel, dim, acc); break;
      }
      const Eigen::Index width = std::min(kPanel, cols - p * kPanel);
      for (int r = 0; r < rows; ++r) {
        double *dst = out + (r0 + r - a_begin) * ld + p * kPanel;
        const double self_a = a.self(r0 + r);
        for (Eigen::Index l = 0; l < width; ++l)
          dst[l] = CombineScore(self_a, b_self(b_begin + p * kPanel + l),
                                acc[r][l], constant);
      }
    }
  }
}

void ScoreTileReference(const ScorerRows &a, const RowMatrixXd &b_rows,
                        const Eigen::VectorXd &b_self, double constant,
                        Eigen::Index a_begin, Eigen::Index a_end,
                        Eigen::Index b_begin, Eigen::Index b_end, double *out,
                        Eigen::Index ld) {
  CheckTileArgs(a, b_rows, b_self, a_begin, a_end, b_begin, b_end);
  const Eigen::Index dim = b_rows.cols();
  for (Eigen::Index i = a_begin; i < a_end; ++i) {
    for (Eigen::Index j = b_begin; j < b_end; ++j) {
      double dot = 0.0;
      for (Eigen::Index k = 0; k < dim; ++k)
        dot += a.projected(i, k) * b_rows(j, k);
      out[(i - a_begin) * ld + (j - b_begin)] =
          CombineScore(a.self(i), b_self(j), dot, constant);
    }
  }
}

namespace {

Eigen::MatrixXd ScoreBlockImpl(const FastScorer &scorer, const RowMatrixXd &x,
                               const RowMatrixXd &y, bool reference) {
  if (x.cols() != scorer.Dim() || y.cols() != scorer.Dim())
    throw DataError("ScoreBlock: dimension mismatch");
  ScorerRows rows = ProjectRows(scorer, x);
  Eigen::VectorXd y_self = SelfTerms(scorer, y);
  RowMatrixXd out(x.rows(), y.rows());
  if (reference)
    ScoreTileReference(rows, y, y_self, scorer.constant, 0, x.rows(), 0,
                       y.rows(), out.data(), out.cols());
  else
    ScoreTile(rows, y, y_self, scorer.constant, 0, x.rows(), 0, y.rows(),
              out.data(), out.cols(), true);
  return out;
}

}  // namespace

Eigen::MatrixXd ScoreBlock(const FastScorer &scorer, const RowMatrixXd &x,
                           const RowMatrixXd &y) {
  return ScoreBlockImpl(scorer, x, y, false);
}

Eigen::MatrixXd ScoreBlockReference(const FastScorer &scorer,
                                    const RowMatrixXd &x,
                                    const RowMatrixXd &y) {
  return ScoreBlockImpl(scorer, x, y, true);
}

}  // namespace spklink
