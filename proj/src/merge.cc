// src/merge.cc

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

#include "spklink/merge.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "spklink/common.h"

namespace spklink {

namespace {

void NormalizeOrThrow(std::vector<double> *v, const std::string &id) {
  double norm2 = 0.0;
  for (double x : *v) norm2 += x * x;
  double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw DataError("pseudo-speaker '" + id +
                    "': representative embedding has zero or non-finite norm");
  for (double &x : *v) x /= norm;
}

std::vector<double> ToDouble(const Embedding &e) {
  std::vector<double> out(e.vector.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!std::isfinite(e.vector[k]))
      throw DataError("embedding '" + e.id + "' has a non-finite value");
    out[k] = e.vector[k];
  }
  return out;
}

}  // namespace

std::string SegmentEmbeddingId(const Segment &segment) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "@%.3f", segment.onset);
  return segment.tape_id + buf;
}

std::unordered_map<std::size_t, Embedding> IndexSegmentEmbeddings(
    const std::vector<Segment> &segments,
    const std::vector<Embedding> &embeddings) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < embeddings.size(); ++i)
    if (!by_id.emplace(embeddings[i].id, i).second)
      throw DataError("duplicate embedding id '" + embeddings[i].id + "'");
  std::unordered_map<std::string, std::size_t> seg_keys;
  std::unordered_map<std::size_t, Embedding> out;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    std::string key = SegmentEmbeddingId(segments[s]);
    if (!seg_keys.emplace(key, s).second)
      throw DataError("segments " + std::to_string(seg_keys[key]) + " and " +
                      std::to_string(s) + " share embedding key '" + key +
                      "'");
    auto it = by_id.find(key);
    if (it != by_id.end()) out.emplace(s, embeddings[it->second]);
  }
  return out;
}

MergeResult MergePseudoSpeakers(
    const std::vector<Segment> &segments,
    const std::unordered_map<std::size_t, Embedding> &segment_embeddings,
    double min_duration) {
  if (!(min_duration > 0.0))
    throw DataError("min_duration must be positive");

  struct Group {
    std::string tape_id;
    double total = 0.0;
    std::vector<double> sum;
  };
  std::map<std::string, Group> groups;
  std::size_t dim = 0;
  bool have_dim = false;

  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Segment &seg = segments[s];
    auto it = segment_embeddings.find(s);
    if (it == segment_embeddings.end())
      throw DataError("no embedding for segment " + std::to_string(s) + " (" +
                      SegmentEmbeddingId(seg) + ", label " + seg.label + ")");
    std::vector<double> v = ToDouble(it->second);
    if (!have_dim) {
      dim = v.size();
      have_dim = true;
    } else if (v.size() != dim) {
      throw DataError("embedding for segment " + std::to_string(s) +
                      " has dimension " + std::to_string(v.size()) +
                      ", expected " + std::to_string(dim));
    }
    Group &g = groups[PseudoSpeakerId(seg.tape_id, seg.label)];
    if (g.sum.empty()) {
      g.tape_id = seg.tape_id;
      g.sum.assign(dim, 0.0);
    }
    g.total += seg.duration;
    for (std::size_t k = 0; k < dim; ++k) g.sum[k] += seg.duration * v[k];
  }

  MergeResult result;
  for (auto &[id, g] : groups) {
    if (g.total < min_duration) {
      result.dropped.push_back({id, g.tape_id, g.total});
      continue;
    }
    PseudoSpeaker p;
    p.id = id;
    p.tape_id = g.tape_id;
    p.total_duration = g.total;
    p.embedding = std::move(g.sum);
    // The weighted mean differs from the sum by a positive factor, which the
    // normalization removes.
    NormalizeOrThrow(&p.embedding, id);
    p.kind = SpeakerKind::kPseudo;
    result.speakers.push_back(std::move(p));
  }
  return result;
}

MergeResult PseudoSpeakersFromEmbeddings(
    const std::vector<Segment> &segments,
    const std::vector<Embedding> &speaker_embeddings,
    double min_duration) {
  std::map<std::string, std::pair<std::string, double>> totals;
  for (const Segment &seg : segments) {
    auto &entry = totals[PseudoSpeakerId(seg.tape_id, seg.label)];
    entry.first = seg.tape_id;
    entry.second += seg.duration;
  }
  std::unordered_map<std::string, const Embedding *> by_id;
  for (const Embedding &e : speaker_embeddings)
    if (!by_id.emplace(e.id, &e).second)
      throw DataError("duplicate embedding id '" + e.id + "'");

  MergeResult result;
  for (const auto &[id, entry] : totals) {
    if (entry.second < min_duration) {
      result.dropped.push_back({id, entry.first, entry.second});
      continue;
    }
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw DataError("no embedding for pseudo-speaker '" + id + "'");
    PseudoSpeaker p;
    p.id = id;
    p.tape_id = entry.first;
    p.total_duration = entry.second;
    p.embedding = ToDouble(*it->second);
    p.kind = SpeakerKind::kPseudo;
    result.speakers.push_back(std::move(p));
  }
  return result;
}

std::vector<PseudoSpeaker> KnownSpeakers(
    const std::vector<Embedding> &embeddings) {
  std::vector<PseudoSpeaker> out;
  out.reserve(embeddings.size());
  std::set<std::string> seen;
  for (const Embedding &e : embeddings) {
    if (!seen.insert(e.id).second)
      throw DataError("duplicate known speaker '" + e.id + "'");
    PseudoSpeaker p;
    p.id = e.id;
    p.embedding = ToDouble(e);
    p.kind = SpeakerKind::kKnown;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace spklink
