// include/spklink/clustering.h

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

#ifndef SPKLINK_CLUSTERING_H_
#define SPKLINK_CLUSTERING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "spklink/condensed_matrix.h"

namespace spklink {

// One agglomeration step. Clusters are named by their smallest member
// index, so `a` and `b` (a < b) are item indices.
struct Merge {
  uint32_t a = 0;
  uint32_t b = 0;
  double height = 0.0;
};

// Complete-linkage merge tree over n items, merges sorted by (height, a, b).
struct Dendrogram {
  uint64_t n = 0;
  std::vector<Merge> merges;
};

struct LinkageOptions {
  // Where the working copy of the distances lives while merging.
  Backing scratch_backing = Backing::kMemory;
  std::string scratch_path = "linkage.scratch.cond";
};

// Complete-linkage agglomeration by the nearest-neighbour-chain algorithm,
// O(n^2) time and O(n) memory on top of a working copy of `d`. Ties are
// broken towards the pair with the smaller (a, b) cluster names, which makes
// the result match the greedy definition exactly.
Dendrogram CompleteLinkage(const CondensedMatrix &d,
                           const LinkageOptions &opts = {});
// Same, consuming `d` as the working copy.
Dendrogram CompleteLinkageInPlace(CondensedMatrix *d);

// Flat clusters from all merges with height <= threshold. Cluster ids are
// dense from 0 in order of each cluster's first item.
std::vector<int> CutDendrogram(const Dendrogram &dendrogram, double threshold);

std::vector<int> CompleteLinkageCluster(const CondensedMatrix &d,
                                        double threshold);

// Greedy agglomeration with full rescans and linkage recomputed from the
// original member distances. Test oracle; n <= 2000.
std::vector<int> BruteForceCluster(const CondensedMatrix &d, double threshold);

// Relabels a partition so ids are dense in order of first appearance.
std::vector<int> CanonicalPartition(const std::vector<int> &labels);

}  // namespace spklink

#endif  // SPKLINK_CLUSTERING_H_
