// include/spklink/merge.h

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

#ifndef SPKLINK_MERGE_H_
#define SPKLINK_MERGE_H_

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "spklink/types.h"

namespace spklink {

struct DroppedSpeaker {
  std::string id;
  std::string tape_id;
  double total_duration = 0.0;
};

struct MergeResult {
  std::vector<PseudoSpeaker> speakers;  // sorted by id
  std::vector<DroppedSpeaker> dropped;  // below the duration floor
};

// Groups segments by (tape_id, label). Each group's representative is the
// duration-weighted mean of its segment embeddings, scaled to unit length.
// Groups shorter than `min_duration` seconds go to `dropped`.
MergeResult MergePseudoSpeakers(
    const std::vector<Segment> &segments,
    const std::unordered_map<std::size_t, Embedding> &segment_embeddings,
    double min_duration = 10.0);

// Key under which a segment's embedding is stored in an EVEC file:
// "<tape_id>@<onset with 3 decimals>".
std::string SegmentEmbeddingId(const Segment &segment);

// Resolves segment embeddings by SegmentEmbeddingId. Throws DataError on
// duplicate ids; segments without an embedding are simply absent.
std::unordered_map<std::size_t, Embedding> IndexSegmentEmbeddings(
    const std::vector<Segment> &segments,
    const std::vector<Embedding> &embeddings);

// Builds pseudo-speakers from precomputed per-speaker embeddings (ids of the
// form "<tape_id>/<label>"), taking durations from the segments. Speakers
// under the floor are dropped as in MergePseudoSpeakers.
MergeResult PseudoSpeakersFromEmbeddings(
    const std::vector<Segment> &segments,
    const std::vector<Embedding> &speaker_embeddings,
    double min_duration = 10.0);

// Known speakers from enrollment embeddings (id = speaker name).
std::vector<PseudoSpeaker> KnownSpeakers(
    const std::vector<Embedding> &embeddings);

}  // namespace spklink

#endif  // SPKLINK_MERGE_H_
