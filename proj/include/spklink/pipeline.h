// include/spklink/pipeline.h

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

#ifndef SPKLINK_PIPELINE_H_
#define SPKLINK_PIPELINE_H_

#include <map>
#include <string>
#include <vector>

#include "spklink/clustering.h"
#include "spklink/condensed_matrix.h"
#include "spklink/merge.h"
#include "spklink/plda.h"
#include "spklink/similarity.h"
#include "spklink/types.h"

namespace spklink {

// Groups training vectors by speaker. Without a map the speaker is the id
// prefix before the first '/'.
SpeakerData GroupBySpeaker(
    const std::vector<Embedding> &embeddings,
    const std::map<std::string, std::string> *utt2spk = nullptr);

struct TrainedPlda {
  PldaModel model;
  PreprocessParams preprocess;
  PldaFitStats stats;
};

TrainedPlda TrainPlda(const std::vector<Embedding> &train,
                      const PldaFitOptions &opts = {},
                      const std::map<std::string, std::string> *utt2spk =
                          nullptr);

struct LinkInputs {
  std::vector<Segment> hypothesis;
  // Either one embedding per hypothesis segment (merged here) or one per
  // pseudo-speaker, with id "tape/label".
  std::vector<Embedding> segment_embeddings;
  std::vector<Embedding> speaker_embeddings;
  std::vector<Embedding> known;
  PldaModel model;
  PreprocessParams preprocess;
  double min_duration = 10.0;
  SimilarityOptions similarity;
  LinkageOptions linkage;
};

struct LinkState {
  MergeResult merged;
  std::vector<PseudoSpeaker> items;  // pseudo-speakers, then known speakers
  CondensedMatrix distances;
  Dendrogram dendrogram;
};

// Merging, preprocessing, scoring and the full dendrogram.
LinkState BuildLinkState(const LinkInputs &inputs);

}  // namespace spklink

#endif  // SPKLINK_PIPELINE_H_
