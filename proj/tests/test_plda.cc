// tests/test_plda.cc

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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "spklink/common.h"
#include "spklink/fast_scorer.h"
#include "spklink/plda.h"
#include "test_util.h"

using namespace spklink;
using spklink::testing::OracleLlr;
using spklink::testing::RandomPdModel;

TEST_SUITE("plda") {

TEST_CASE("preprocess mean") {
  std::vector<Embedding> v = {{"a", {1.0f, 1.0f}}, {"b", {3.0f, 3.0f}}};
  PreprocessParams p = FitPreprocess(v);
  CHECK(p.mean(0) == 2.0);
  CHECK(p.mean(1) == 2.0);
  p = FitPreprocess(std::vector<Embedding>{{"a", {1.5f, -2.0f}}});
  CHECK(p.mean(0) == 1.5);
  CHECK(p.mean(1) == -2.0);
  CHECK_THROWS_AS(FitPreprocess(std::vector<Embedding>{}), DataError);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  Eigen::VectorXd m(6);
  m << 1, -2, 3, 0.5, 10, -7;
  std::vector<Eigen::VectorXd> draws;
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd x(6);
    for (int k = 0; k < 6; ++k) x(k) = m(k) + normal(rng);
    draws.push_back(x);
  }
  p = FitPreprocess(draws);
  for (int k = 0; k < 6; ++k) CHECK(std::abs(p.mean(k) - m(k)) < 0.2);
}

TEST_CASE("preprocess apply") {
  PreprocessParams p;
  p.mean = Eigen::Vector2d(0, 0);
  Embedding out = ApplyPreprocess(p, Embedding{"x", {3.0f, 4.0f}});
  CHECK(out.vector[0] == doctest::Approx(0.6));
  CHECK(out.vector[1] == doctest::Approx(0.8));
  p.mean = Eigen::Vector2d(1, 0);
  Eigen::VectorXd y = ApplyPreprocess(p, Eigen::Vector2d(4, 4));
  CHECK(y(0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(y(1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(ApplyPreprocess(p, Eigen::Vector2d(1, 0)), DataError);
}

TEST_CASE("score pair analytic one-dimensional case") {
  PldaModel m;
  m.mu = Eigen::VectorXd::Zero(1);
  m.between = Eigen::MatrixXd::Ones(1, 1);
  m.within = Eigen::MatrixXd::Ones(1, 1);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  CHECK(ScorePair(m, zero, zero) ==
        doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-14));
  // Joint covariance [[2,1],[1,2]], inverse [[2,-1],[-1,2]]/3.
  Eigen::VectorXd a(1), b(1);
  a << 1.0;
  b << -1.0;
  const double joint = -std::log(2 * M_PI) - 0.5 * std::log(3.0) -
                       0.5 * (2 + 2 + 2) / 3.0;
  const double single = -0.5 * std::log(2 * M_PI) - 0.5 * std::log(2.0) -
                        0.5 * 1.0 / 2.0;
  CHECK(ScorePair(m, a, b) == doctest::Approx(joint - 2 * single));
  CHECK(ScorePair(m, a, b) == doctest::Approx(OracleLlr(m, a, b)));
}

TEST_CASE("score pair symmetry and dimension errors") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    PldaModel m = RandomPdModel(rng, 12);
    std::normal_distribution<double> normal;
    Eigen::VectorXd a(12), b(12);
    for (int k = 0; k < 12; ++k) {
      a(k) = normal(rng);
      b(k) = normal(rng);
    }
    CHECK(std::abs(ScorePair(m, a, b) - ScorePair(m, b, a)) <= 1e-10);
    CHECK(ScorePair(m, a, b) == doctest::Approx(OracleLlr(m, a, b)));
  }
  PldaModel m = RandomPdModel(rng, 3);
  CHECK_THROWS_AS(ScorePair(m, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2)),
                  DataError);
  m.between = -10.0 * Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(ScorePair(m, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)),
                  NumericError);
}

TEST_CASE("fast scorer matches the normative score") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  PldaModel m = RandomPdModel(rng, 16);
  FastScorer s = PrepareScorer(m);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd a(16), b(16);
    for (int k = 0; k < 16; ++k) {
      a(k) = normal(rng) * 0.3;
      b(k) = normal(rng) * 0.3;
    }
    worst = std::max(worst, std::abs(s.Score(a, b) - OracleLlr(m, a, b)));
    CHECK(s.Score(-a, -b) == doctest::Approx(s.Score(a, b)).epsilon(1e-12));
  }
  CHECK(worst <= 1e-6);

  PldaModel unit;
  unit.mu = Eigen::VectorXd::Zero(1);
  unit.between = unit.within = Eigen::MatrixXd::Ones(1, 1);
  CHECK(PrepareScorer(unit).constant ==
        doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("score block") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  PldaModel m = RandomPdModel(rng, 10);
  FastScorer s = PrepareScorer(m);
  auto random_rows = [&](int n) {
    RowMatrixXd x(n, 10);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 10; ++k) x(i, k) = 0.3 * normal(rng);
    return x;
  };
  RowMatrixXd v = random_rows(1);
  Eigen::MatrixXd one = ScoreBlock(s, v, v);
  REQUIRE(one.rows() == 1);
  CHECK(one(0, 0) == doctest::Approx(ScorePair(m, v.row(0).transpose(),
                                               v.row(0).transpose())));
  RowMatrixXd x = random_rows(3), y = random_rows(2);
  Eigen::MatrixXd xy = ScoreBlock(s, x, y);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(xy(i, j) - ScorePair(m, x.row(i).transpose(),
                                          y.row(j).transpose())) <= 1e-6);

  RowMatrixXd big_x = random_rows(37), big_y = random_rows(29);
  Eigen::MatrixXd a = ScoreBlock(s, big_x, big_y);
  Eigen::MatrixXd b = ScoreBlock(s, big_y, big_x);
  CHECK((a - b.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
  Eigen::MatrixXd ref = ScoreBlockReference(s, big_x, big_y);
  CHECK(a == ref);
  CHECK_THROWS_AS(ScoreBlock(s, big_x, RowMatrixXd::Zero(3, 4)), DataError);
}

TEST_CASE("score tile is independent of threading and tiling") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  PldaModel m = RandomPdModel(rng, 19);
  FastScorer s = PrepareScorer(m);
  RowMatrixXd x(53, 19);
  for (int i = 0; i < 53; ++i)
    for (int k = 0; k < 19; ++k) x(i, k) = normal(rng);
  ScorerRows rows = ProjectRows(s, x);
  std::vector<double> out_par(53 * 53), out_ser(53 * 53), out_ref(53 * 53);
  ScoreTile(rows, x, rows.self, s.constant, 0, 53, 0, 53, out_par.data(), 53,
            true);
  for (int a0 = 0; a0 < 53; a0 += 7)
    for (int b0 = 0; b0 < 53; b0 += 11)
      ScoreTile(rows, x, rows.self, s.constant, a0, std::min(a0 + 7, 53), b0,
                std::min(b0 + 11, 53), out_ser.data() + a0 * 53 + b0, 53,
                false);
  ScoreTileReference(rows, x, rows.self, s.constant, 0, 53, 0, 53,
                     out_ref.data(), 53);
  CHECK(out_par == out_ref);
  CHECK(out_ser == out_ref);
}

TEST_CASE("plda converges to the closed-form estimate") {
  // With every speaker holding n observations the likelihood maximum has a
  // closed form, which EM must approach.
  std::mt19937_64 rng(17);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(4, 4);
  Eigen::MatrixXd w = 0.5 * Eigen::MatrixXd::Identity(4, 4);
  SpeakerData data = testing::SamplePldaData(rng, b, w, 500, 10);
  testing::BalancedMle mle = testing::BalancedPldaMle(data);
  PldaFitOptions many;
  many.iterations = 200;
  PldaModel m = FitPlda(data, many);
  CHECK((m.between - mle.between).norm() / mle.between.norm() <= 1e-6);
  CHECK((m.within - mle.within).norm() / mle.within.norm() <= 1e-6);

  // Ten iterations already land within 1% of it.
  PldaFitStats stats;
  PldaModel ten = FitPlda(data, {}, &stats);
  CHECK((ten.between - mle.between).norm() / mle.between.norm() <= 0.01);
  CHECK((ten.within - mle.within).norm() / mle.within.norm() <= 0.01);

  // Against the generating parameters the between error is dominated by
  // the 500 speaker draws: about sqrt((D + 1) / 500) = 0.1 here.
  CHECK((ten.within - w).norm() / w.norm() <= 0.10);
  CHECK((ten.between - b).norm() / b.norm() <= 0.25);

  REQUIRE(stats.log_likelihood.size() == 11);
  for (std::size_t i = 1; i < stats.log_likelihood.size(); ++i)
    CHECK(stats.log_likelihood[i] >=
          stats.log_likelihood[i - 1] -
              1e-8 * std::abs(stats.log_likelihood[i - 1]));
  CHECK(PldaLogLikelihood(ten, data) ==
        doctest::Approx(stats.log_likelihood.back()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ten.within);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK((ten.between - ten.between.transpose()).norm() == 0.0);
}

TEST_CASE("plda likelihood matches the joint density") {
  std::mt19937_64 rng(23);
  PldaModel m = RandomPdModel(rng, 3);
  SpeakerData data = testing::SamplePldaData(rng, m.between, m.within, 6, 3);
  data["extra"] = {Eigen::Vector3d(0.1, 0.2, -0.3)};
  CHECK(PldaLogLikelihood(m, data) ==
        doctest::Approx(testing::OracleDataLogLikelihood(m, data)));
}

TEST_CASE("plda with single observations stays symmetric") {
  std::mt19937_64 rng(2);
  SpeakerData data = testing::SamplePldaData(
      rng, Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(3, 3),
      200, 1);
  PldaFitStats stats;
  PldaModel init = InitPlda(data);
  CHECK((init.between - init.within).norm() == 0.0);
  PldaModel m = FitPlda(data, {}, &stats);
  for (std::size_t i = 1; i < stats.log_likelihood.size(); ++i)
    CHECK(stats.log_likelihood[i] >=
          stats.log_likelihood[i - 1] -
              1e-8 * std::abs(stats.log_likelihood[i - 1]));
  // One observation per speaker cannot tell the two covariances apart.
  CHECK((m.between - m.within).norm() <= 1e-9 * m.within.norm());
}

TEST_CASE("plda edge cases") {
  std::mt19937_64 rng(12);
  SpeakerData data = testing::SamplePldaData(
      rng, Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(3, 3),
      20, 4);
  PldaFitOptions zero;
  zero.iterations = 0;
  PldaModel init = InitPlda(data);
  PldaModel same = FitPlda(data, zero);
  CHECK(same.between == init.between);
  CHECK(same.within == init.within);

  SpeakerData one = {{"a", {Eigen::Vector2d(1, 0)}}};
  CHECK_THROWS_AS(FitPlda(one), DataError);

  // Every speaker repeats one vector: the within covariance collapses and
  // is clamped.
  SpeakerData degenerate;
  std::normal_distribution<double> normal;
  for (int s = 0; s < 30; ++s) {
    Eigen::VectorXd v(3);
    for (int k = 0; k < 3; ++k) v(k) = normal(rng);
    degenerate["s" + std::to_string(s)] = {v, v, v};
  }
  PldaFitStats stats;
  PldaFitOptions long_run;
  long_run.iterations = 60;
  PldaModel m = FitPlda(degenerate, long_run, &stats);
  CHECK(stats.clamped_iterations > 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.within);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(std::isfinite(ScorePair(m, Eigen::Vector3d(0.1, 0.2, 0.3),
                                Eigen::Vector3d(0.3, 0.2, 0.1))));
}

TEST_CASE("plda file round trip") {
  std::mt19937_64 rng(31);
  PldaModel m = RandomPdModel(rng, 5);
  m.mu = Eigen::VectorXd::LinSpaced(5, -1, 1);
  PreprocessParams p;
  p.mean = Eigen::VectorXd::LinSpaced(5, 3, 4);
  const std::string path =
      (std::filesystem::temp_directory_path() / "spklink_test.plda").string();
  WritePldaFile(path, m, p);
  PldaModel back;
  PreprocessParams back_p;
  ReadPldaFile(path, &back, &back_p);
  CHECK(back.mu == m.mu);
  CHECK(back.between == m.between);
  CHECK(back.within == m.within);
  CHECK(back_p.mean == p.mean);
  std::remove(path.c_str());
}

}  // TEST_SUITE
