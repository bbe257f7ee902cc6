// src/sweep.cc

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

#include "spklink/sweep.h"

#include <sstream>

#include "spklink/common.h"

namespace spklink {

namespace {

void CheckContext(const SweepContext &ctx) {
  if (!ctx.dendrogram || !ctx.items || !ctx.distances || !ctx.reference ||
      !ctx.hypothesis)
    throw std::invalid_argument("SweepContext is incomplete");
}

}  // namespace

LinkingResult LinkAtThreshold(const SweepContext &ctx, double threshold) {
  CheckContext(ctx);
  std::vector<int> clusters = CutDendrogram(*ctx.dendrogram, threshold);
  return ResolveIdentities(clusters, *ctx.items, *ctx.distances, threshold);
}

ImpurityPoint EvaluateThreshold(const SweepContext &ctx, double threshold) {
  LinkingResult result = LinkAtThreshold(ctx, threshold);
  std::vector<Segment> linked = ApplyLinking(result, *ctx.hypothesis);
  OverlapStats stats = OverlapMatrix(*ctx.reference, linked, ctx.scoring);
  Impurities imp = ImpuritiesFromOverlap(stats);
  ImpurityPoint point;
  point.threshold = threshold;
  point.speaker_impurity = imp.speaker;
  point.cluster_impurity = imp.cluster;
  point.der = DerFromOverlap(stats).der;
  return point;
}

std::vector<ImpurityPoint> SweepThresholds(
    const SweepContext &ctx, const std::vector<double> &thresholds) {
  CheckContext(ctx);
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] > thresholds[i - 1]))
      throw DataError("sweep thresholds must be strictly increasing");
  std::vector<ImpurityPoint> points(thresholds.size());
  std::string error;
  bool failed = false;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    try {
      points[i] = EvaluateThreshold(ctx, thresholds[i]);
    } catch (const std::exception &e) {
#pragma omp critical(sweep_error)
      {
        if (!failed) error = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw DataError(error);
  return points;
}

bool SweepIsMonotone(const std::vector<ImpurityPoint> &points,
                     std::string *why) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    const ImpurityPoint &a = points[i - 1], &b = points[i];
    const char *what = nullptr;
    if (b.speaker_impurity > a.speaker_impurity)
      what = "speaker impurity increased";
    else if (b.cluster_impurity < a.cluster_impurity)
      what = "cluster impurity decreased";
    if (what) {
      if (why) {
        std::ostringstream os;
        os << what << " between thresholds " << a.threshold << " and "
           << b.threshold;
        *why = os.str();
      }
      return false;
    }
  }
  return true;
}

std::vector<double> LinearThresholds(double lo, double hi, int count) {
  if (count < 1) throw DataError("threshold count must be positive");
  if (count == 1) return {lo};
  if (!(hi > lo)) throw DataError("threshold range must be increasing");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return out;
}

}  // namespace spklink
