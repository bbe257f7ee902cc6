// src/similarity.cc

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

#include "spklink/similarity.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "spklink/common.h"

namespace spklink {

RowMatrixXd StackEmbeddings(const std::vector<PseudoSpeaker> &items) {
  if (items.empty()) return RowMatrixXd();
  const std::size_t dim = items.front().embedding.size();
  RowMatrixXd x(items.size(), dim);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].embedding.size() != dim)
      throw DataError("item '" + items[i].id + "' has dimension " +
                      std::to_string(items[i].embedding.size()) +
                      ", expected " + std::to_string(dim));
    for (std::size_t k = 0; k < dim; ++k) x(i, k) = items[i].embedding[k];
  }
  return x;
}

CondensedMatrix BuildSimilarity(const FastScorer &scorer,
                                const std::vector<PseudoSpeaker> &items,
                                const SimilarityOptions &opts) {
  return BuildSimilarity(scorer, StackEmbeddings(items), opts);
}

CondensedMatrix BuildSimilarity(const FastScorer &scorer,
                                const RowMatrixXd &embeddings,
                                const SimilarityOptions &opts) {
  const int64_t n = embeddings.rows();
  if (n < 2) throw DataError("similarity needs at least 2 items");
  if (embeddings.cols() != scorer.Dim())
    throw DataError("similarity: embedding dimension " +
                    std::to_string(embeddings.cols()) +
                    " does not match the model (" +
                    std::to_string(scorer.Dim()) + ")");
  if (opts.block_size < 1) throw DataError("block_size must be positive");

  const uint64_t entries = CondensedMatrix::NumEntries(n);
  const uint64_t store_bytes = entries * sizeof(float);
  Backing backing = Backing::kMemory;
  switch (opts.backing) {
    case BackingChoice::kMemory:
      if (store_bytes > opts.memory_budget_bytes)
        throw DataError("condensed matrix needs " +
                        std::to_string(store_bytes) +
                        " bytes, over the memory budget of " +
                        std::to_string(opts.memory_budget_bytes));
      break;
    case BackingChoice::kDisk:
      backing = Backing::kDisk;
      break;
    case BackingChoice::kAuto:
      if (store_bytes > opts.memory_budget_bytes) backing = Backing::kDisk;
      break;
  }
  CondensedMatrix out =
      backing == Backing::kMemory
          ? CondensedMatrix::InMemory(n)
          : CondensedMatrix::CreateFile(opts.disk_path, n,
                                        opts.remove_disk_file_on_close);

  const ScorerRows rows = ProjectRows(scorer, embeddings);
  const int64_t bs = std::min<int64_t>(opts.block_size, n);
  const int64_t num_blocks = (n + bs - 1) / bs;
  std::vector<std::pair<int64_t, int64_t>> tiles;
  for (int64_t bi = 0; bi < num_blocks; ++bi)
    for (int64_t bj = bi; bj < num_blocks; ++bj) tiles.emplace_back(bi, bj);

  std::mutex progress_mutex;
  uint64_t pairs_done = 0;
  bool non_finite = false;
#pragma omp parallel reduction(|| : non_finite)
  {
    std::vector<double> scores(bs * bs);
    std::vector<float> run(bs);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t t = 0; t < tiles.size(); ++t) {
      const int64_t i0 = tiles[t].first * bs, i1 = std::min(n, i0 + bs);
      const int64_t j0 = tiles[t].second * bs, j1 = std::min(n, j0 + bs);
      // On a diagonal tile only the columns right of each row matter, so
      // the first row can be skipped entirely.
      const int64_t row_end = tiles[t].first == tiles[t].second ? i1 - 1 : i1;
      ScoreTile(rows, embeddings, rows.self, scorer.constant, i0, row_end, j0,
                j1, scores.data(), bs, /*parallel=*/false);
      uint64_t tile_pairs = 0;
      for (int64_t i = i0; i < row_end; ++i) {
        const int64_t jstart = std::max(j0, i + 1);
        if (jstart >= j1) continue;
        const double *src = scores.data() + (i - i0) * bs + (jstart - j0);
        const int64_t count = j1 - jstart;
        for (int64_t c = 0; c < count; ++c) {
          run[c] = static_cast<float>(-src[c]);
          non_finite = non_finite || !std::isfinite(run[c]);
        }
        out.WriteRun(CondensedMatrix::Index(n, i, jstart), run.data(), count);
        tile_pairs += count;
      }
      if (opts.progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        pairs_done += tile_pairs;
        opts.progress(pairs_done, entries);
      }
    }
  }
  if (non_finite)
    throw NumericError("non-finite distance in similarity matrix");
  return out;
}

CondensedMatrix BuildSimilarityReference(const FastScorer &scorer,
                                         const RowMatrixXd &embeddings) {
  const int64_t n = embeddings.rows();
  if (n < 2) throw DataError("similarity needs at least 2 items");
  const ScorerRows rows = ProjectRows(scorer, embeddings);
  CondensedMatrix out = CondensedMatrix::InMemory(n);
  uint64_t k = 0;
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = i + 1; j < n; ++j) {
      double score;
      ScoreTileReference(rows, embeddings, rows.self, scorer.constant, i,
                         i + 1, j, j + 1, &score, 1);
      out.Set(k++, static_cast<float>(-score));
    }
  }
  return out;
}

}  // namespace spklink
