// include/spklink/similarity.h

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

#ifndef SPKLINK_SIMILARITY_H_
#define SPKLINK_SIMILARITY_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spklink/condensed_matrix.h"
#include "spklink/fast_scorer.h"
#include "spklink/types.h"

namespace spklink {

enum class BackingChoice { kAuto, kMemory, kDisk };

struct SimilarityOptions {
  int64_t block_size = 1024;
  BackingChoice backing = BackingChoice::kAuto;
  // Largest condensed store kept in memory; above it kAuto goes to disk and
  // kMemory is an error.
  uint64_t memory_budget_bytes = uint64_t(2) << 30;
  // COND1 file used for disk backing.
  std::string disk_path = "similarity.cond";
  bool remove_disk_file_on_close = false;
  // Called after each finished tile with (pairs done, total pairs). May be
  // called from any thread, but never concurrently.
  std::function<void(uint64_t, uint64_t)> progress;
};

// Rows of the items' embeddings as an n x D matrix. Throws DataError on
// inconsistent dimensions.
RowMatrixXd StackEmbeddings(const std::vector<PseudoSpeaker> &items);

// Condensed distances d(i, j) = -llr(e_i, e_j) over all item pairs, computed
// tile by tile (tiles of at most block_size x block_size, processed in
// parallel). Each entry's value does not depend on block_size or thread
// count.
CondensedMatrix BuildSimilarity(const FastScorer &scorer,
                                const std::vector<PseudoSpeaker> &items,
                                const SimilarityOptions &opts = {});
CondensedMatrix BuildSimilarity(const FastScorer &scorer,
                                const RowMatrixXd &embeddings,
                                const SimilarityOptions &opts = {});

// Serial pair-by-pair version of BuildSimilarity (in-memory only).
CondensedMatrix BuildSimilarityReference(const FastScorer &scorer,
                                         const RowMatrixXd &embeddings);

}  // namespace spklink

#endif  // SPKLINK_SIMILARITY_H_
