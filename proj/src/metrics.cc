// src/metrics.cc

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

#include "spklink/metrics.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spklink/assignment.h"
#include "spklink/common.h"

namespace spklink {

namespace {

enum class EventKind { kRef, kHyp, kRegion, kCollar };

struct Event {
  int64_t time;
  EventKind kind;
  int id;
  int delta;
};

class LabelIndex {
 public:
  int Get(const std::string &label) {
    auto [it, inserted] = index_.emplace(label, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(label);
    return it->second;
  }
  const std::vector<std::string> &names() const { return names_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
};

// Raw statistics keyed by provisional label ids; compacted at the end so
// that only labels with scored time are reported.
struct RawStats {
  std::map<std::pair<int, int>, int64_t> overlap;
  std::unordered_map<int, int64_t> ref_time, hyp_time;
  int64_t total_reference = 0, missed = 0, false_alarm = 0, matched = 0;
};

void ScoreTape(const std::string &tape, std::vector<Event> &events,
               bool use_regions, RawStats *raw) {
  std::sort(events.begin(), events.end(),
            [](const Event &a, const Event &b) { return a.time < b.time; });
  std::map<int, int> refs, hyps;
  int region_depth = 0, collar_depth = 0;
  std::size_t e = 0;
  while (e < events.size()) {
    const int64_t t = events[e].time;
    for (; e < events.size() && events[e].time == t; ++e) {
      const Event &ev = events[e];
      switch (ev.kind) {
        case EventKind::kRef:
          if ((refs[ev.id] += ev.delta) == 0) refs.erase(ev.id);
          break;
        case EventKind::kHyp:
          if ((hyps[ev.id] += ev.delta) == 0) hyps.erase(ev.id);
          break;
        case EventKind::kRegion: region_depth += ev.delta; break;
        case EventKind::kCollar: collar_depth += ev.delta; break;
      }
    }
    if (e == events.size()) break;
    const int64_t dt = events[e].time - t;
    if (dt <= 0) continue;
    if ((use_regions && region_depth <= 0) || collar_depth > 0) continue;
    const int64_t nref = static_cast<int64_t>(refs.size());
    const int64_t nhyp = static_cast<int64_t>(hyps.size());
    if (nref > 1)
      throw DataError("overlapping reference speech on tape '" + tape +
                      "' at " + std::to_string(FromMillis(t)) +
                      " s (not supported by the scorer)");
    for (const auto &[r, count] : refs) raw->ref_time[r] += dt;
    for (const auto &[h, count] : hyps) raw->hyp_time[h] += dt;
    for (const auto &[r, rc] : refs)
      for (const auto &[h, hc] : hyps) raw->overlap[{r, h}] += dt;
    raw->total_reference += nref * dt;
    raw->missed += std::max<int64_t>(0, nref - nhyp) * dt;
    raw->false_alarm += std::max<int64_t>(0, nhyp - nref) * dt;
    raw->matched += std::min(nref, nhyp) * dt;
  }
}

}  // namespace

int64_t ToMillis(double seconds) { return std::llround(seconds * 1000.0); }

double OverlapStats::OverlapSeconds(const std::string &ref,
                                    const std::string &hyp) const {
  auto r = std::find(ref_labels.begin(), ref_labels.end(), ref);
  auto h = std::find(hyp_labels.begin(), hyp_labels.end(), hyp);
  if (r == ref_labels.end() || h == hyp_labels.end()) return 0.0;
  auto it = overlap.find({int(r - ref_labels.begin()), int(h - hyp_labels.begin())});
  return it == overlap.end() ? 0.0 : FromMillis(it->second);
}

OverlapStats OverlapMatrix(const std::vector<Segment> &reference,
                           const std::vector<Segment> &hypothesis,
                           const ScoringOptions &opts) {
  if (opts.collar < 0.0) throw DataError("collar must be non-negative");
  LabelIndex ref_index, hyp_index;
  std::map<std::string, std::vector<Event>> tapes;
  const int64_t collar = ToMillis(opts.collar);
  for (const Segment &s : reference) {
    const int id = ref_index.Get(s.label);
    const int64_t on = ToMillis(s.onset), off = ToMillis(s.end());
    auto &ev = tapes[s.tape_id];
    ev.push_back({on, EventKind::kRef, id, +1});
    ev.push_back({off, EventKind::kRef, id, -1});
    if (collar > 0) {
      for (int64_t b : {on, off}) {
        ev.push_back({b - collar, EventKind::kCollar, 0, +1});
        ev.push_back({b + collar, EventKind::kCollar, 0, -1});
      }
    }
  }
  for (const Segment &s : hypothesis) {
    const int id = hyp_index.Get(s.label);
    auto &ev = tapes[s.tape_id];
    ev.push_back({ToMillis(s.onset), EventKind::kHyp, id, +1});
    ev.push_back({ToMillis(s.end()), EventKind::kHyp, id, -1});
  }
  const bool use_regions = opts.regions.has_value();
  if (use_regions) {
    for (const ScoringRegion &r : *opts.regions) {
      auto it = tapes.find(r.tape_id);
      if (it == tapes.end()) continue;
      it->second.push_back({ToMillis(r.onset), EventKind::kRegion, 0, +1});
      it->second.push_back(
          {ToMillis(r.onset + r.duration), EventKind::kRegion, 0, -1});
    }
  }

  RawStats raw;
  for (auto &[tape, events] : tapes) ScoreTape(tape, events, use_regions, &raw);

  // Compact label ids in first-seen order, keeping only labels with time.
  OverlapStats stats;
  std::vector<int> ref_map(ref_index.names().size(), -1),
      hyp_map(hyp_index.names().size(), -1);
  for (std::size_t r = 0; r < ref_map.size(); ++r) {
    auto it = raw.ref_time.find(int(r));
    if (it == raw.ref_time.end()) continue;
    ref_map[r] = static_cast<int>(stats.ref_labels.size());
    stats.ref_labels.push_back(ref_index.names()[r]);
    stats.ref_time.push_back(it->second);
  }
  for (std::size_t h = 0; h < hyp_map.size(); ++h) {
    auto it = raw.hyp_time.find(int(h));
    if (it == raw.hyp_time.end()) continue;
    hyp_map[h] = static_cast<int>(stats.hyp_labels.size());
    stats.hyp_labels.push_back(hyp_index.names()[h]);
    stats.hyp_time.push_back(it->second);
  }
  for (const auto &[key, ms] : raw.overlap)
    stats.overlap[{ref_map[key.first], hyp_map[key.second]}] = ms;
  stats.total_reference = raw.total_reference;
  stats.missed = raw.missed;
  stats.false_alarm = raw.false_alarm;
  stats.matched = raw.matched;
  return stats;
}

namespace {

// Optimal mapping as (ref index, hyp index) pairs.
std::vector<std::pair<int, int>> OptimalPairs(const OverlapStats &s) {
  // Only labels involved in some overlap can be mapped usefully.
  std::vector<int> refs, hyps;
  std::unordered_map<int, int> ref_pos, hyp_pos;
  for (const auto &[key, ms] : s.overlap) {
    if (ms <= 0) continue;
    if (ref_pos.emplace(key.first, int(refs.size())).second)
      refs.push_back(key.first);
    if (hyp_pos.emplace(key.second, int(hyps.size())).second)
      hyps.push_back(key.second);
  }
  const int rows = static_cast<int>(refs.size()),
            cols = static_cast<int>(hyps.size());
  std::vector<int64_t> weights(std::size_t(rows) * cols, 0);
  for (const auto &[key, ms] : s.overlap)
    if (ms > 0)
      weights[std::size_t(ref_pos[key.first]) * cols + hyp_pos[key.second]] =
          ms;
  std::vector<int> assigned = MaxWeightAssignment(weights, rows, cols);
  std::vector<std::pair<int, int>> pairs;
  for (int r = 0; r < rows; ++r)
    if (assigned[r] >= 0) pairs.emplace_back(refs[r], hyps[assigned[r]]);
  return pairs;
}

}  // namespace

std::map<std::string, std::string> MapSpeakersOptimal(const OverlapStats &s) {
  std::map<std::string, std::string> mapping;
  for (const auto &[r, h] : OptimalPairs(s))
    mapping[s.hyp_labels[h]] = s.ref_labels[r];
  return mapping;
}

DerBreakdown DerFromOverlap(const OverlapStats &stats) {
  if (stats.total_reference <= 0)
    throw DataError("DER undefined: no reference speech in the scored time");
  int64_t correct = 0;
  for (const auto &[r, h] : OptimalPairs(stats))
    correct += stats.overlap.at({r, h});
  const int64_t confusion = stats.matched - correct;
  DerBreakdown out;
  out.missed = FromMillis(stats.missed);
  out.false_alarm = FromMillis(stats.false_alarm);
  out.confusion = FromMillis(confusion);
  out.total_reference = FromMillis(stats.total_reference);
  out.der = static_cast<double>(stats.missed + stats.false_alarm + confusion) /
            static_cast<double>(stats.total_reference);
  return out;
}

DerBreakdown ComputeDer(const std::vector<Segment> &reference,
                        const std::vector<Segment> &hypothesis,
                        const ScoringOptions &opts) {
  return DerFromOverlap(OverlapMatrix(reference, hypothesis, opts));
}

DerBreakdown ComputeTapeLevelDer(const std::vector<Segment> &reference,
                                 const std::vector<Segment> &hypothesis,
                                 const ScoringOptions &opts) {
  std::map<std::string, std::pair<std::vector<Segment>, std::vector<Segment>>>
      by_tape;
  for (const Segment &s : reference) by_tape[s.tape_id].first.push_back(s);
  for (const Segment &s : hypothesis) by_tape[s.tape_id].second.push_back(s);
  int64_t missed = 0, false_alarm = 0, confusion = 0, total = 0;
  for (const auto &[tape, segs] : by_tape) {
    OverlapStats stats = OverlapMatrix(segs.first, segs.second, opts);
    int64_t correct = 0;
    for (const auto &[r, h] : OptimalPairs(stats))
      correct += stats.overlap.at({r, h});
    missed += stats.missed;
    false_alarm += stats.false_alarm;
    confusion += stats.matched - correct;
    total += stats.total_reference;
  }
  if (total <= 0)
    throw DataError("DER undefined: no reference speech in the scored time");
  DerBreakdown out;
  out.missed = FromMillis(missed);
  out.false_alarm = FromMillis(false_alarm);
  out.confusion = FromMillis(confusion);
  out.total_reference = FromMillis(total);
  out.der = static_cast<double>(missed + false_alarm + confusion) /
            static_cast<double>(total);
  return out;
}

Impurities ImpuritiesFromOverlap(const OverlapStats &stats) {
  std::vector<int64_t> best_for_ref(stats.ref_labels.size(), 0),
      best_for_hyp(stats.hyp_labels.size(), 0);
  for (const auto &[key, ms] : stats.overlap) {
    best_for_ref[key.first] = std::max(best_for_ref[key.first], ms);
    best_for_hyp[key.second] = std::max(best_for_hyp[key.second], ms);
  }
  int64_t ref_total = 0, ref_pure = 0, hyp_total = 0, hyp_pure = 0;
  for (std::size_t r = 0; r < best_for_ref.size(); ++r) {
    ref_total += stats.ref_time[r];
    ref_pure += best_for_ref[r];
  }
  for (std::size_t h = 0; h < best_for_hyp.size(); ++h) {
    hyp_total += stats.hyp_time[h];
    hyp_pure += best_for_hyp[h];
  }
  if (ref_total <= 0 || hyp_total <= 0)
    throw DataError("impurities undefined: no scored reference or hypothesis");
  Impurities out;
  out.speaker = static_cast<double>(ref_total - ref_pure) / ref_total;
  out.cluster = static_cast<double>(hyp_total - hyp_pure) / hyp_total;
  return out;
}

Impurities ComputeImpurities(const std::vector<Segment> &reference,
                             const std::vector<Segment> &hypothesis,
                             const ScoringOptions &opts) {
  return ImpuritiesFromOverlap(OverlapMatrix(reference, hypothesis, opts));
}

EqualImpurity EqualImpurityPoint(const std::vector<ImpurityPoint> &curve) {
  if (curve.size() < 2)
    throw DataError("equal impurity needs at least 2 sweep points");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const ImpurityPoint &p = curve[i];
    const double diff = p.speaker_impurity - p.cluster_impurity;
    if (diff == 0.0) return {p.threshold, p.speaker_impurity};
    if (i + 1 == curve.size()) break;
    const ImpurityPoint &q = curve[i + 1];
    const double next = q.speaker_impurity - q.cluster_impurity;
    if ((diff > 0.0) != (next > 0.0) && next != 0.0) {
      const double t = diff / (diff - next);
      return {p.threshold + t * (q.threshold - p.threshold),
              p.speaker_impurity + t * (q.speaker_impurity - p.speaker_impurity)};
    }
  }
  throw DataError("curves do not cross in swept range");
}

}  // namespace spklink
