// src/plda.cc

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

#include "spklink/plda.h"

#include <cmath>

#include "spklink/binary_io.h"
#include "spklink/common.h"

namespace spklink {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
constexpr std::string_view kPldaMagic = "PLDA1\n";

Eigen::VectorXd ToEigen(const Embedding &e) {
  Eigen::VectorXd v(e.dim());
  for (std::size_t k = 0; k < e.dim(); ++k) v(k) = e.vector[k];
  return v;
}

void Symmetrize(Eigen::MatrixXd *m) {
  Eigen::MatrixXd t = 0.5 * (*m + m->transpose());
  *m = std::move(t);
}

// log|A| for symmetric positive definite A.
double LogDetPd(const Eigen::LLT<Eigen::MatrixXd> &llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::LLT<Eigen::MatrixXd> CholeskyOrThrow(const Eigen::MatrixXd &m,
                                            const std::string &what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericError(what + " is not positive definite");
  return llt;
}

Eigen::MatrixXd InversePd(const Eigen::MatrixXd &m, const std::string &what) {
  Eigen::LLT<Eigen::MatrixXd> llt = CholeskyOrThrow(m, what);
  Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  Symmetrize(&inv);
  return inv;
}

// Sufficient statistics of the training data. Speakers with the same number
// of observations share their posterior covariance, so they are grouped.
struct PldaStats {
  int dim = 0;
  double num_obs = 0;
  double num_speakers = 0;
  Eigen::MatrixXd scatter;            // sum_i x_i x_i'
  std::map<int, Eigen::MatrixXd> sums;  // count -> (speakers x D) of sums
};

PldaStats ComputeStats(const SpeakerData &data) {
  if (data.size() < 2)
    throw DataError("PLDA training needs at least 2 speakers, got " +
                    std::to_string(data.size()));
  PldaStats stats;
  stats.dim = -1;
  std::map<int, std::vector<Eigen::VectorXd>> grouped;
  for (const auto &[spk, vecs] : data) {
    if (vecs.empty())
      throw DataError("speaker '" + spk + "' has no training vectors");
    Eigen::VectorXd sum;
    for (const Eigen::VectorXd &x : vecs) {
      if (stats.dim < 0) {
        stats.dim = static_cast<int>(x.size());
        stats.scatter = Eigen::MatrixXd::Zero(stats.dim, stats.dim);
      }
      if (x.size() != stats.dim)
        throw DataError("speaker '" + spk + "': dimension mismatch");
      if (!x.allFinite())
        throw DataError("speaker '" + spk + "': non-finite training vector");
      stats.scatter.selfadjointView<Eigen::Lower>().rankUpdate(x);
      if (sum.size() == 0)
        sum = x;
      else
        sum += x;
    }
    grouped[static_cast<int>(vecs.size())].push_back(std::move(sum));
    stats.num_obs += vecs.size();
    stats.num_speakers += 1;
  }
  stats.scatter = stats.scatter.selfadjointView<Eigen::Lower>();
  for (auto &[count, rows] : grouped) {
    Eigen::MatrixXd m(rows.size(), stats.dim);
    for (std::size_t r = 0; r < rows.size(); ++r) m.row(r) = rows[r];
    stats.sums.emplace(count, std::move(m));
  }
  return stats;
}

double LogLikelihoodFromStats(const PldaStats &stats, const PldaModel &model) {
  const int dim = stats.dim;
  Eigen::LLT<Eigen::MatrixXd> within_llt =
      CholeskyOrThrow(model.within, "within-speaker covariance");
  double logdet_w = LogDetPd(within_llt);
  // Within-speaker scatter around each speaker's own mean.
  Eigen::MatrixXd resid = stats.scatter;
  double ll = 0.0;
  for (const auto &[count, sums] : stats.sums) {
    const double n = count;
    const double s = sums.rows();
    resid.noalias() -= (sums.transpose() * sums) / n;
    Eigen::MatrixXd mean_cov = model.between + model.within / n;
    Eigen::LLT<Eigen::MatrixXd> llt =
        CholeskyOrThrow(mean_cov, "speaker-mean covariance");
    Eigen::MatrixXd means = sums / n;
    Eigen::MatrixXd z = llt.matrixL().solve(means.transpose());
    ll += -0.5 * z.squaredNorm() -
          0.5 * s * (LogDetPd(llt) + dim * kLog2Pi);
    ll += s * (-0.5 * (n - 1) * dim * kLog2Pi - 0.5 * (n - 1) * logdet_w -
               0.5 * dim * std::log(n));
  }
  Eigen::MatrixXd w_inv_resid = within_llt.solve(resid);
  ll -= 0.5 * w_inv_resid.trace();
  return ll;
}

PldaModel InitFromStats(const PldaStats &stats) {
  const int dim = stats.dim;
  Eigen::VectorXd total_sum = Eigen::VectorXd::Zero(dim);
  for (const auto &[count, sums] : stats.sums)
    total_sum += sums.colwise().sum().transpose();
  Eigen::VectorXd mean = total_sum / stats.num_obs;
  Eigen::MatrixXd cov =
      stats.scatter / stats.num_obs - mean * mean.transpose();
  Symmetrize(&cov);
  double eps = 1e-6 * cov.trace() / dim;
  if (!(eps > 0.0)) eps = 1e-12;
  PldaModel model;
  model.mu = Eigen::VectorXd::Zero(dim);
  model.between = 0.5 * cov + eps * Eigen::MatrixXd::Identity(dim, dim);
  model.within = model.between;
  return model;
}

// Clamps the eigenvalues of `within` from below. Returns true if any
// eigenvalue was raised.
bool ClampWithin(const Eigen::MatrixXd &between, Eigen::MatrixXd *within) {
  const int dim = within->rows();
  double floor = 1e-8 * (between.trace() + within->trace()) / dim;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(*within);
  if (eig.info() != Eigen::Success) return false;
  Eigen::VectorXd values = eig.eigenvalues();
  if (values.minCoeff() > floor) return false;
  values = values.cwiseMax(floor);
  *within = eig.eigenvectors() * values.asDiagonal() *
            eig.eigenvectors().transpose();
  Symmetrize(within);
  return true;
}

}  // namespace

PreprocessParams FitPreprocess(const std::vector<Eigen::VectorXd> &vectors) {
  if (vectors.empty()) throw DataError("cannot fit preprocessing on no data");
  PreprocessParams params;
  params.mean = Eigen::VectorXd::Zero(vectors.front().size());
  for (const Eigen::VectorXd &v : vectors) {
    if (v.size() != params.mean.size())
      throw DataError("preprocess: dimension mismatch");
    params.mean += v;
  }
  params.mean /= static_cast<double>(vectors.size());
  return params;
}

PreprocessParams FitPreprocess(const std::vector<Embedding> &vectors) {
  std::vector<Eigen::VectorXd> converted;
  converted.reserve(vectors.size());
  for (const Embedding &e : vectors) converted.push_back(ToEigen(e));
  return FitPreprocess(converted);
}

Eigen::VectorXd ApplyPreprocess(const PreprocessParams &params,
                                const Eigen::VectorXd &x) {
  if (x.size() != params.mean.size())
    throw DataError("preprocess: vector has dimension " +
                    std::to_string(x.size()) + ", expected " +
                    std::to_string(params.mean.size()));
  Eigen::VectorXd centered = x - params.mean;
  double norm = centered.norm();
  if (!(norm > 0.0))
    throw DataError("preprocess: zero norm after mean subtraction");
  return centered / norm;
}

Embedding ApplyPreprocess(const PreprocessParams &params, const Embedding &x) {
  Eigen::VectorXd out;
  try {
    out = ApplyPreprocess(params, ToEigen(x));
  } catch (const DataError &e) {
    throw DataError("embedding '" + x.id + "': " + e.what());
  }
  Embedding result;
  result.id = x.id;
  result.vector.resize(out.size());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    result.vector[k] = static_cast<float>(out(k));
  return result;
}

PldaModel InitPlda(const SpeakerData &data) {
  return InitFromStats(ComputeStats(data));
}

double PldaLogLikelihood(const PldaModel &model, const SpeakerData &data) {
  return LogLikelihoodFromStats(ComputeStats(data), model);
}

PldaModel FitPlda(const SpeakerData &data, const PldaFitOptions &opts,
                  PldaFitStats *fit_stats) {
  PldaStats stats = ComputeStats(data);
  const int dim = stats.dim;
  PldaModel model = InitFromStats(stats);
  if (fit_stats) {
    *fit_stats = PldaFitStats();
    fit_stats->log_likelihood.push_back(LogLikelihoodFromStats(stats, model));
  }

  for (int iter = 1; iter <= opts.iterations; ++iter) {
    Eigen::MatrixXd within_inv, between_inv;
    try {
      within_inv = InversePd(model.within, "within-speaker covariance");
      between_inv = InversePd(model.between, "between-speaker covariance");
    } catch (const NumericError &e) {
      throw NumericError(std::string(e.what()) + " at EM iteration " +
                         std::to_string(iter));
    }

    // E-step. For a speaker with n observations summing to m:
    //   precision = B^-1 + n W^-1,  y_hat = precision^-1 W^-1 m.
    Eigen::MatrixXd post_cov_sum = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd weighted_post_cov_sum = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd yy = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd n_yy = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd my = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto &[count, sums] : stats.sums) {
      const double n = count;
      const double s = sums.rows();
      Eigen::MatrixXd post_cov =
          InversePd(between_inv + n * within_inv, "posterior precision");
      Eigen::MatrixXd gain = within_inv * post_cov;
      Eigen::MatrixXd y_hat = sums * gain;  // rows are y_hat'
      Eigen::MatrixXd y_hat_gram = y_hat.transpose() * y_hat;
      post_cov_sum += s * post_cov;
      weighted_post_cov_sum += (s * n) * post_cov;
      yy += y_hat_gram;
      n_yy += n * y_hat_gram;
      my.noalias() += sums.transpose() * y_hat;
    }

    // M-step.
    model.between = (post_cov_sum + yy) / stats.num_speakers;
    model.within = (stats.scatter - my - my.transpose() + n_yy +
                    weighted_post_cov_sum) /
                   stats.num_obs;
    Symmetrize(&model.between);
    Symmetrize(&model.within);
    if (!model.between.allFinite() || !model.within.allFinite())
      throw NumericError("non-finite covariance at EM iteration " +
                         std::to_string(iter));
    if (ClampWithin(model.between, &model.within)) {
      SPKLINK_WARN << "within-speaker covariance collapsed at iteration "
                   << iter << "; eigenvalues clamped";
      if (fit_stats) ++fit_stats->clamped_iterations;
    }
    if (fit_stats)
      fit_stats->log_likelihood.push_back(
          LogLikelihoodFromStats(stats, model));
  }
  return model;
}

double GaussianLogDensity(const Eigen::VectorXd &x,
                          const Eigen::MatrixXd &cov) {
  Eigen::LLT<Eigen::MatrixXd> llt = CholeskyOrThrow(cov, "covariance");
  Eigen::VectorXd z = llt.matrixL().solve(x);
  return -0.5 * (z.squaredNorm() + LogDetPd(llt) + x.size() * kLog2Pi);
}

double ScorePair(const PldaModel &model, const Eigen::VectorXd &x1,
                 const Eigen::VectorXd &x2) {
  const int dim = model.Dim();
  if (x1.size() != dim || x2.size() != dim)
    throw DataError("ScorePair: dimension mismatch");
  Eigen::MatrixXd total = model.between + model.within;
  Eigen::MatrixXd joint(2 * dim, 2 * dim);
  joint << total, model.between, model.between, total;
  Eigen::VectorXd stacked(2 * dim);
  stacked << x1 - model.mu, x2 - model.mu;
  return GaussianLogDensity(stacked, joint) -
         GaussianLogDensity(x1 - model.mu, total) -
         GaussianLogDensity(x2 - model.mu, total);
}

void WritePldaFile(const std::string &path, const PldaModel &model,
                   const PreprocessParams &preprocess) {
  const int dim = model.Dim();
  if (model.between.rows() != dim || model.within.rows() != dim ||
      preprocess.mean.size() != dim)
    throw DataError("PLDA1: inconsistent dimensions");
  std::string out(kPldaMagic);
  AppendLE<uint32_t>(&out, static_cast<uint32_t>(dim));
  for (int i = 0; i < dim; ++i) AppendLE<double>(&out, model.mu(i));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) AppendLE<double>(&out, model.between(i, j));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) AppendLE<double>(&out, model.within(i, j));
  for (int i = 0; i < dim; ++i) AppendLE<double>(&out, preprocess.mean(i));
  WriteFileBytes(path, out);
}

void ReadPldaFile(const std::string &path, PldaModel *model,
                  PreprocessParams *preprocess) {
  std::string bytes = ReadFileBytes(path);
  if (std::string_view(bytes).substr(0, kPldaMagic.size()) != kPldaMagic)
    throw DataError(path + ": PLDA1: bad magic");
  ByteReader reader(std::string_view(bytes).substr(kPldaMagic.size()),
                    path + ": PLDA1");
  const int dim = static_cast<int>(reader.Read<uint32_t>());
  model->mu.resize(dim);
  model->between.resize(dim, dim);
  model->within.resize(dim, dim);
  for (int i = 0; i < dim; ++i) model->mu(i) = reader.Read<double>();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) model->between(i, j) = reader.Read<double>();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) model->within(i, j) = reader.Read<double>();
  Eigen::VectorXd mean(dim);
  for (int i = 0; i < dim; ++i) mean(i) = reader.Read<double>();
  if (preprocess) preprocess->mean = std::move(mean);
  if (reader.remaining() != 0)
    throw DataError(path + ": PLDA1: trailing bytes");
  if (!model->mu.allFinite() || !model->between.allFinite() ||
      !model->within.allFinite())
    throw DataError(path + ": PLDA1: non-finite parameters");
}

}  // namespace spklink
