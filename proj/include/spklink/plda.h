// include/spklink/plda.h

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

#ifndef SPKLINK_PLDA_H_
#define SPKLINK_PLDA_H_

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spklink/types.h"

namespace spklink {

// Centering + length normalization applied to every embedding before PLDA.
struct PreprocessParams {
  Eigen::VectorXd mean;
};

PreprocessParams FitPreprocess(const std::vector<Embedding> &vectors);
PreprocessParams FitPreprocess(const std::vector<Eigen::VectorXd> &vectors);

// Returns (x - mean) / |x - mean|. Throws DataError if the centered vector
// is zero or the dimensions differ.
Eigen::VectorXd ApplyPreprocess(const PreprocessParams &params,
                                const Eigen::VectorXd &x);
Embedding ApplyPreprocess(const PreprocessParams &params, const Embedding &x);

// Two-covariance PLDA: x = mu + y + e, y ~ N(0, between), e ~ N(0, within).
struct PldaModel {
  Eigen::VectorXd mu;
  Eigen::MatrixXd between;
  Eigen::MatrixXd within;

  int Dim() const { return static_cast<int>(mu.size()); }
};

// Per-speaker training vectors, already preprocessed.
using SpeakerData = std::map<std::string, std::vector<Eigen::VectorXd>>;

struct PldaFitOptions {
  int iterations = 10;
};

struct PldaFitStats {
  // Total data log-likelihood under the initial model (index 0) and after
  // each EM iteration.
  std::vector<double> log_likelihood;
  int clamped_iterations = 0;
};

// Initial model used by FitPlda: between = within = 0.5 * sample covariance
// + eps * I, eps = 1e-6 * trace / D.
PldaModel InitPlda(const SpeakerData &data);

// EM training of the two-covariance model. mu stays at zero. Throws
// DataError for fewer than 2 speakers or empty speakers, NumericError if the
// covariances become non-finite.
PldaModel FitPlda(const SpeakerData &data, const PldaFitOptions &opts = {},
                  PldaFitStats *stats = nullptr);

// Marginal log-likelihood of `data` under `model` (speakers independent).
double PldaLogLikelihood(const PldaModel &model, const SpeakerData &data);

// Same-speaker vs different-speaker log-likelihood ratio evaluated from the
// three Gaussian log-densities directly. This is the reference definition;
// FastScorer must agree with it.
double ScorePair(const PldaModel &model, const Eigen::VectorXd &x1,
                 const Eigen::VectorXd &x2);

// Log-density of N(x; 0, cov) via Cholesky; throws NumericError if cov is
// not positive definite.
double GaussianLogDensity(const Eigen::VectorXd &x, const Eigen::MatrixXd &cov);

// PLDA1 file: "PLDA1\n" | u32 D | mu | between | within | preprocess mean,
// all little-endian f64, matrices row-major.
void WritePldaFile(const std::string &path, const PldaModel &model,
                   const PreprocessParams &preprocess);
void ReadPldaFile(const std::string &path, PldaModel *model,
                  PreprocessParams *preprocess);

}  // namespace spklink

#endif  // SPKLINK_PLDA_H_
