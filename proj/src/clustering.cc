// src/clustering.cc

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

#include "spklink/clustering.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "spklink/common.h"

namespace spklink {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<int> CanonicalPartition(const std::vector<int> &labels) {
  std::unordered_map<int, int> remap;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] =
        remap.emplace(labels[i], static_cast<int>(remap.size()));
    out[i] = it->second;
  }
  return out;
}

Dendrogram CompleteLinkageInPlace(CondensedMatrix *d) {
  const uint64_t n = d->n();
  if (n == 0) throw DataError("cannot cluster an empty matrix");
  if (n > std::numeric_limits<uint32_t>::max())
    throw DataError("too many items to cluster");
  Dendrogram dendrogram;
  dendrogram.n = n;
  if (n == 1) return dendrogram;
  dendrogram.merges.reserve(n - 1);

  // Active clusters as a doubly linked list in index order; a cluster keeps
  // the slot of its smallest member.
  std::vector<uint32_t> next(n + 1), prev(n + 1);
  const uint32_t head = static_cast<uint32_t>(n);  // sentinel
  for (uint32_t i = 0; i < n; ++i) {
    next[i] = i + 1;
    prev[i] = i == 0 ? head : i - 1;
  }
  next[head] = 0;
  prev[head] = static_cast<uint32_t>(n - 1);
  next[n - 1] = head;

  auto remove = [&](uint32_t x) {
    next[prev[x]] = next[x];
    prev[next[x]] = prev[x];
  };

  std::vector<uint32_t> chain;
  chain.reserve(n);
  for (uint64_t step = 0; step + 1 < n; ++step) {
    if (chain.empty()) chain.push_back(next[head]);
    uint32_t a, b;
    for (;;) {
      a = chain.back();
      // Nearest active neighbour of a; on equal distance the smaller index
      // wins, since iteration is in index order and the comparison strict.
      uint32_t best = head;
      float best_d = std::numeric_limits<float>::infinity();
      for (uint32_t k = next[head]; k != head; k = next[k]) {
        if (k == a) continue;
        float dk = d->At(a, k);
        if (best == head || dk < best_d) {
          best = k;
          best_d = dk;
        }
      }
      b = best;
      if (chain.size() >= 2 && chain[chain.size() - 2] == b) break;
      chain.push_back(b);
    }
    chain.pop_back();
    chain.pop_back();
    const uint32_t lo = std::min(a, b), hi = std::max(a, b);
    const float height = d->At(lo, hi);
    dendrogram.merges.push_back({lo, hi, static_cast<double>(height)});
    remove(hi);
    // Complete linkage: the merged cluster is as far from k as the farther
    // of its two parts.
    for (uint32_t k = next[head]; k != head; k = next[k]) {
      if (k == lo) continue;
      float merged = std::max(d->At(lo, k), d->At(hi, k));
      d->SetPair(lo, k, merged);
    }
  }

  std::sort(dendrogram.merges.begin(), dendrogram.merges.end(),
            [](const Merge &x, const Merge &y) {
              if (x.height != y.height) return x.height < y.height;
              if (x.a != y.a) return x.a < y.a;
              return x.b < y.b;
            });
  return dendrogram;
}

Dendrogram CompleteLinkage(const CondensedMatrix &d,
                           const LinkageOptions &opts) {
  CondensedMatrix work = d.Clone(opts.scratch_backing, opts.scratch_path);
  return CompleteLinkageInPlace(&work);
}

std::vector<int> CutDendrogram(const Dendrogram &dendrogram,
                               double threshold) {
  DisjointSets sets(dendrogram.n);
  for (const Merge &m : dendrogram.merges) {
    if (m.height > threshold) break;
    sets.Union(m.a, m.b);
  }
  std::vector<int> roots(dendrogram.n);
  for (uint64_t i = 0; i < dendrogram.n; ++i)
    roots[i] = static_cast<int>(sets.Find(i));
  return CanonicalPartition(roots);
}

std::vector<int> CompleteLinkageCluster(const CondensedMatrix &d,
                                        double threshold) {
  return CutDendrogram(CompleteLinkage(d), threshold);
}

std::vector<int> BruteForceCluster(const CondensedMatrix &d,
                                   double threshold) {
  const uint64_t n = d.n();
  if (n == 0) throw DataError("cannot cluster an empty matrix");
  if (n > 2000)
    throw DataError("brute-force clustering is limited to n <= 2000");

  std::vector<std::vector<uint32_t>> members(n);
  for (uint32_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<bool> active(n, true);
  // linkage[a][b] for active clusters a != b, always recomputed from the
  // original item distances.
  std::vector<double> linkage(n * n, 0.0);
  auto complete = [&](uint32_t a, uint32_t b) {
    double worst = -std::numeric_limits<double>::infinity();
    for (uint32_t i : members[a])
      for (uint32_t j : members[b]) worst = std::max<double>(worst, d.At(i, j));
    return worst;
  };
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = a + 1; b < n; ++b)
      linkage[a * n + b] = linkage[b * n + a] = complete(a, b);

  for (;;) {
    uint32_t best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    // Scan pairs in (a, b) order with a strict comparison, so ties go to the
    // smaller pair of cluster names.
    for (uint32_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (uint32_t b = a + 1; b < n; ++b) {
        if (!active[b]) continue;
        if (!found || linkage[a * n + b] < best) {
          best = linkage[a * n + b];
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    }
    if (!found || best > threshold) break;
    members[best_a].insert(members[best_a].end(), members[best_b].begin(),
                           members[best_b].end());
    members[best_b].clear();
    active[best_b] = false;
    for (uint32_t k = 0; k < n; ++k) {
      if (!active[k] || k == best_a) continue;
      linkage[best_a * n + k] = linkage[k * n + best_a] = complete(best_a, k);
    }
  }

  std::vector<int> labels(n);
  for (uint32_t c = 0; c < n; ++c)
    for (uint32_t i : members[c]) labels[i] = static_cast<int>(c);
  return CanonicalPartition(labels);
}

}  // namespace spklink
