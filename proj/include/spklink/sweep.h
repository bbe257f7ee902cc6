// include/spklink/sweep.h

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

#ifndef SPKLINK_SWEEP_H_
#define SPKLINK_SWEEP_H_

#include <string>
#include <vector>

#include "spklink/clustering.h"
#include "spklink/condensed_matrix.h"
#include "spklink/identities.h"
#include "spklink/metrics.h"
#include "spklink/types.h"

namespace spklink {

// Everything needed to evaluate linking at a threshold without rescoring:
// the dendrogram is cut per threshold and the stage-1 hypothesis relabeled.
struct SweepContext {
  const Dendrogram *dendrogram = nullptr;
  const std::vector<PseudoSpeaker> *items = nullptr;
  const CondensedMatrix *distances = nullptr;
  const std::vector<Segment> *reference = nullptr;
  const std::vector<Segment> *hypothesis = nullptr;  // stage-1 labels
  ScoringOptions scoring;
};

LinkingResult LinkAtThreshold(const SweepContext &ctx, double threshold);
ImpurityPoint EvaluateThreshold(const SweepContext &ctx, double threshold);

// One point per threshold (thresholds must be strictly increasing).
// Points are computed in parallel.
std::vector<ImpurityPoint> SweepThresholds(const SweepContext &ctx,
                                           const std::vector<double> &thresholds);

// Checks that speaker impurity never increases and cluster impurity never
// decreases along the sweep. On failure, describes the first violation.
bool SweepIsMonotone(const std::vector<ImpurityPoint> &points,
                     std::string *why = nullptr);

// `count` thresholds evenly spaced over [lo, hi].
std::vector<double> LinearThresholds(double lo, double hi, int count);

}  // namespace spklink

#endif  // SPKLINK_SWEEP_H_
