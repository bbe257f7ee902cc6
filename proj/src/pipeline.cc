// src/pipeline.cc

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

#include "spklink/pipeline.h"

#include "spklink/common.h"
#include "spklink/evec.h"
#include "spklink/fast_scorer.h"

namespace spklink {

SpeakerData GroupBySpeaker(const std::vector<Embedding> &embeddings,
                           const std::map<std::string, std::string> *utt2spk) {
  SpeakerData data;
  for (const Embedding &e : embeddings) {
    std::string speaker;
    if (utt2spk) {
      auto it = utt2spk->find(e.id);
      if (it == utt2spk->end())
        throw DataError("no speaker for training vector '" + e.id + "'");
      speaker = it->second;
    } else {
      std::size_t slash = e.id.find('/');
      if (slash == std::string::npos || slash == 0)
        throw DataError("training vector id '" + e.id +
                        "' has no '<speaker>/' prefix");
      speaker = e.id.substr(0, slash);
    }
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXf>(
        e.vector.data(), static_cast<Eigen::Index>(e.vector.size()))
        .cast<double>();
    data[speaker].push_back(std::move(v));
  }
  return data;
}

TrainedPlda TrainPlda(const std::vector<Embedding> &train,
                      const PldaFitOptions &opts,
                      const std::map<std::string, std::string> *utt2spk) {
  CheckEmbeddings(train);
  TrainedPlda out;
  out.preprocess = FitPreprocess(train);
  SpeakerData data = GroupBySpeaker(train, utt2spk);
  for (auto &[speaker, vectors] : data)
    for (Eigen::VectorXd &v : vectors) v = ApplyPreprocess(out.preprocess, v);
  out.model = FitPlda(data, opts, &out.stats);
  return out;
}

LinkState BuildLinkState(const LinkInputs &in) {
  const int dim = in.model.Dim();
  auto check_dim = [&](const std::vector<Embedding> &v, const char *what) {
    if (!v.empty() && static_cast<int>(CheckEmbeddings(v)) != dim)
      throw DataError(std::string(what) + " dimension " +
                      std::to_string(v.front().dim()) +
                      " does not match the PLDA model (" +
                      std::to_string(dim) + ")");
  };
  check_dim(in.segment_embeddings, "segment embedding");
  check_dim(in.speaker_embeddings, "pseudo-speaker embedding");
  check_dim(in.known, "known-speaker embedding");

  LinkState state;
  if (!in.speaker_embeddings.empty()) {
    std::vector<Embedding> pre;
    pre.reserve(in.speaker_embeddings.size());
    for (const Embedding &e : in.speaker_embeddings)
      pre.push_back(ApplyPreprocess(in.preprocess, e));
    state.merged =
        PseudoSpeakersFromEmbeddings(in.hypothesis, pre, in.min_duration);
  } else {
    std::vector<Embedding> pre;
    pre.reserve(in.segment_embeddings.size());
    for (const Embedding &e : in.segment_embeddings)
      pre.push_back(ApplyPreprocess(in.preprocess, e));
    state.merged = MergePseudoSpeakers(
        in.hypothesis, IndexSegmentEmbeddings(in.hypothesis, pre),
        in.min_duration);
  }
  state.items = state.merged.speakers;
  std::vector<Embedding> known;
  known.reserve(in.known.size());
  for (const Embedding &e : in.known)
    known.push_back(ApplyPreprocess(in.preprocess, e));
  for (PseudoSpeaker &k : KnownSpeakers(known))
    state.items.push_back(std::move(k));
  if (state.items.size() < 2)
    throw DataError("need at least 2 speakers to link, have " +
                    std::to_string(state.items.size()));
  SPKLINK_LOG << "linking " << state.merged.speakers.size()
              << " pseudo-speakers (" << state.merged.dropped.size()
              << " below " << in.min_duration << " s dropped) and "
              << in.known.size() << " known speakers";

  const FastScorer scorer = PrepareScorer(in.model);
  state.distances = BuildSimilarity(scorer, state.items, in.similarity);
  // The working copy for merging is as large as the store, so it follows the
  // store onto disk.
  LinkageOptions linkage = in.linkage;
  if (state.distances.backing() == Backing::kDisk)
    linkage.scratch_backing = Backing::kDisk;
  state.dendrogram = CompleteLinkage(state.distances, linkage);
  return state;
}

}  // namespace spklink
