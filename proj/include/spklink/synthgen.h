// include/spklink/synthgen.h

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

#ifndef SPKLINK_SYNTHGEN_H_
#define SPKLINK_SYNTHGEN_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spklink/plda.h"
#include "spklink/types.h"

namespace spklink {

// Shape of a synthetic longitudinal archive. Defaults follow the statistics
// of a real broadcast archive: ~29 minute tapes on average, a small set of
// recurring speakers (presenters) with a heavy-tailed number of
// appearances, and a stage-1 diarization that over-splits speakers.
struct SynthConfig {
  uint64_t seed = 1;
  int dim = 64;
  int n_tapes = 200;
  int speakers_total = 120;
  int recurring_speakers = 15;
  // Mean number of tapes a recurring speaker appears on.
  double recurring_mean_tapes = 12.0;
  // Recurring speakers are exported as known speakers first.
  int known_speakers = 8;
  int enrollment_per_known = 5;
  double tape_duration_mean = 1737.0;
  double tape_duration_std = 900.0;
  int segments_min = 20;
  int segments_max = 60;
  double sigma_b_scale = 1.0;
  double sigma_w_scale = 1.0;
  // Probability that a true speaker is split into two pseudo-speakers on a
  // tape, and the range of the smaller part's share of that speaker's time.
  double stage1_split_prob = 0.57;
  double stage1_split_share_min = 0.1;
  double stage1_split_share_max = 0.4;
  // Probability that a hypothesis segment carries a wrong pseudo-label.
  double stage1_label_noise = 0.06;
  double annotated_fraction = 0.3;
  // Out-of-domain PLDA training data from the same generative model.
  int train_speakers = 300;
  int train_per_speaker = 8;
};

// Throws DataError if a field is out of range or the archive cannot be
// built (e.g. more recurring speakers than the tapes can host).
void ValidateSynthConfig(const SynthConfig &config);

struct SynthArchive {
  ArchiveManifest manifest;
  std::vector<Segment> reference;   // global speaker names "spkNNN"
  std::vector<Segment> hypothesis;  // tape-local pseudo-labels "SNN"
  // One per hypothesis segment, id = SegmentEmbeddingId(segment).
  std::vector<Embedding> segment_embeddings;
  std::vector<Embedding> known_embeddings;  // id = speaker name
  std::vector<Embedding> train_embeddings;  // id = "<speaker>/<k>"
  PldaModel truth;
};

SynthArchive GenerateArchive(const SynthConfig &config);

// Stage-1 simulation on one archive's reference: per tape, every true
// speaker gets a fresh pseudo-label, is split over two labels with
// probability stage1_split_prob, and a stage1_label_noise fraction of
// segments is moved to another label of the same tape. Never merges two
// true speakers.
std::vector<Segment> InjectStage1Errors(const std::vector<Segment> &reference,
                                        const SynthConfig &config,
                                        std::mt19937_64 &rng);

// For each hypothesis segment, the true speaker whose speech it covers.
// Hypothesis segments never straddle reference boundaries.
std::vector<std::string> TrueSpeakers(const std::vector<Segment> &reference,
                                      const std::vector<Segment> &hypothesis);

// Writes manifest.jsonl, reference.rttm, hypothesis.rttm, segments.evec,
// known.evec, train.evec and truth.plda under `dir`.
void WriteArchive(const SynthArchive &archive, const std::string &dir);

SynthConfig SynthConfigFromJson(const std::string &json_text);
std::string SynthConfigToJson(const SynthConfig &config);

}  // namespace spklink

#endif  // SPKLINK_SYNTHGEN_H_
