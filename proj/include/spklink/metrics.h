// include/spklink/metrics.h

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

#ifndef SPKLINK_METRICS_H_
#define SPKLINK_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spklink/types.h"

namespace spklink {

// All scoring happens on an integer millisecond grid (the resolution of
// RTTM), so sums of durations are exact.
int64_t ToMillis(double seconds);
inline double FromMillis(int64_t ms) { return static_cast<double>(ms) / 1000.0; }

struct ScoringOptions {
  // Restricts scoring to these regions; tapes without a region are ignored.
  // Unset means every instant of every tape is scored.
  std::optional<std::vector<ScoringRegion>> regions;
  // Excluded zone on each side of every reference segment boundary.
  double collar = 0.0;
};

// Co-occurrence statistics of reference speakers and hypothesis labels over
// the scored time. Labels only appear if they have scored time.
struct OverlapStats {
  std::vector<std::string> ref_labels;
  std::vector<std::string> hyp_labels;
  std::map<std::pair<int, int>, int64_t> overlap;  // (ref, hyp) -> ms
  std::vector<int64_t> ref_time;                   // per ref label, ms
  std::vector<int64_t> hyp_time;                   // per hyp label, ms
  int64_t total_reference = 0;  // sum over time of #ref speakers
  int64_t missed = 0;           // sum of max(0, #ref - #hyp)
  int64_t false_alarm = 0;      // sum of max(0, #hyp - #ref)
  int64_t matched = 0;          // sum of min(#ref, #hyp)

  // Overlap in seconds by label names (0 if absent).
  double OverlapSeconds(const std::string &ref, const std::string &hyp) const;
};

// Throws DataError if reference speakers overlap inside the scored time.
OverlapStats OverlapMatrix(const std::vector<Segment> &reference,
                           const std::vector<Segment> &hypothesis,
                           const ScoringOptions &opts = {});

// One-to-one hyp label -> ref speaker mapping maximizing the total mapped
// overlap (exact assignment). Only pairs with positive overlap are mapped.
std::map<std::string, std::string> MapSpeakersOptimal(const OverlapStats &s);

struct DerBreakdown {
  double missed = 0.0;
  double false_alarm = 0.0;
  double confusion = 0.0;
  double total_reference = 0.0;
  double der = 0.0;
};

DerBreakdown DerFromOverlap(const OverlapStats &stats);

// Throws DataError if there is no scored reference time.
DerBreakdown ComputeDer(const std::vector<Segment> &reference,
                        const std::vector<Segment> &hypothesis,
                        const ScoringOptions &opts = {});

// DER with the speaker mapping done separately on each tape, errors summed
// over tapes (duration-weighted average of per-tape DER).
DerBreakdown ComputeTapeLevelDer(const std::vector<Segment> &reference,
                                 const std::vector<Segment> &hypothesis,
                                 const ScoringOptions &opts = {});

struct Impurities {
  double speaker = 0.0;  // time of each speaker outside its dominant label
  double cluster = 0.0;  // time of each label outside its dominant speaker
};

Impurities ImpuritiesFromOverlap(const OverlapStats &stats);
Impurities ComputeImpurities(const std::vector<Segment> &reference,
                             const std::vector<Segment> &hypothesis,
                             const ScoringOptions &opts = {});

struct ImpurityPoint {
  double threshold = 0.0;
  double speaker_impurity = 0.0;
  double cluster_impurity = 0.0;
  double der = 0.0;
};

struct EqualImpurity {
  double threshold = 0.0;
  double impurity = 0.0;
};

// First crossing of the speaker and cluster impurity curves, linearly
// interpolated between adjacent sweep points. Throws DataError if they do
// not cross.
EqualImpurity EqualImpurityPoint(const std::vector<ImpurityPoint> &curve);

}  // namespace spklink

#endif  // SPKLINK_METRICS_H_
