// bench/bench_similarity.cc

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

// Throughput of the tiled OpenMP scoring kernel against the serial
// reference, and of the full condensed-matrix build.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "spklink/fast_scorer.h"
#include "spklink/similarity.h"

namespace {

using namespace spklink;

Eigen::MatrixXd RandomSpd(std::mt19937_64 &rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = normal(rng);
  return (a * a.transpose()) / dim + 0.1 * Eigen::MatrixXd::Identity(dim, dim);
}

struct Fixture {
  FastScorer scorer;
  RowMatrixXd x;
  ScorerRows rows;

  Fixture(int n, int dim) {
    std::mt19937_64 rng(1);
    PldaModel m;
    m.mu = Eigen::VectorXd::Zero(dim);
    m.between = RandomSpd(rng, dim);
    m.within = RandomSpd(rng, dim);
    scorer = PrepareScorer(m);
    std::normal_distribution<double> normal;
    x.resize(n, dim);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < dim; ++k) x(i, k) = normal(rng);
      x.row(i).normalize();
    }
    rows = ProjectRows(scorer, x);
  }
};

void BM_ScoreTile(benchmark::State &state) {
  const int n = state.range(0), dim = state.range(1);
  Fixture f(n, dim);
  std::vector<double> out(std::size_t(n) * n);
  for (auto _ : state) {
    ScoreTile(f.rows, f.x, f.rows.self, f.scorer.constant, 0, n, 0, n,
              out.data(), n);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["pairs/s"] = benchmark::Counter(
      double(n) * n, benchmark::Counter::kIsIterationInvariantRate);
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ScoreTileSerial(benchmark::State &state) {
  const int n = state.range(0), dim = state.range(1);
  Fixture f(n, dim);
  std::vector<double> out(std::size_t(n) * n);
  for (auto _ : state) {
    ScoreTile(f.rows, f.x, f.rows.self, f.scorer.constant, 0, n, 0, n,
              out.data(), n, /*parallel=*/false);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["pairs/s"] = benchmark::Counter(
      double(n) * n, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_ScoreTileReference(benchmark::State &state) {
  const int n = state.range(0), dim = state.range(1);
  Fixture f(n, dim);
  std::vector<double> out(std::size_t(n) * n);
  for (auto _ : state) {
    ScoreTileReference(f.rows, f.x, f.rows.self, f.scorer.constant, 0, n, 0,
                       n, out.data(), n);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["pairs/s"] = benchmark::Counter(
      double(n) * n, benchmark::Counter::kIsIterationInvariantRate);
}

void BM_BuildSimilarity(benchmark::State &state) {
  const int n = state.range(0), dim = state.range(1);
  Fixture f(n, dim);
  for (auto _ : state) {
    CondensedMatrix d = BuildSimilarity(f.scorer, f.x);
    benchmark::DoNotOptimize(d.size());
  }
  state.counters["pairs/s"] =
      benchmark::Counter(double(n) * (n - 1) / 2,
                         benchmark::Counter::kIsIterationInvariantRate);
}

void BM_BuildSimilarityReference(benchmark::State &state) {
  const int n = state.range(0), dim = state.range(1);
  Fixture f(n, dim);
  for (auto _ : state) {
    CondensedMatrix d = BuildSimilarityReference(f.scorer, f.x);
    benchmark::DoNotOptimize(d.size());
  }
  state.counters["pairs/s"] =
      benchmark::Counter(double(n) * (n - 1) / 2,
                         benchmark::Counter::kIsIterationInvariantRate);
}

BENCHMARK(BM_ScoreTile)->Args({256, 128})->Args({512, 512})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScoreTileSerial)->Args({256, 128})->Args({512, 512})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreTileReference)->Args({256, 128})->Args({512, 512})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildSimilarity)->Args({2000, 256})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BuildSimilarityReference)->Args({2000, 256})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
