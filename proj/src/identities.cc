// src/identities.cc

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

#include "spklink/identities.h"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "spklink/common.h"

namespace spklink {

LinkingResult ResolveIdentities(const std::vector<int> &clusters,
                                const std::vector<PseudoSpeaker> &items,
                                const CondensedMatrix &d, double threshold) {
  if (clusters.size() != items.size())
    throw DataError("cluster assignment covers " +
                    std::to_string(clusters.size()) + " items, expected " +
                    std::to_string(items.size()));
  if (!items.empty() && d.n() != items.size())
    throw DataError("distance matrix size does not match the item count");

  int num_clusters = 0;
  for (int c : clusters) num_clusters = std::max(num_clusters, c + 1);
  std::vector<std::vector<std::size_t>> known(num_clusters), pseudo(num_clusters);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (clusters[i] < 0) throw DataError("negative cluster id");
    (items[i].kind == SpeakerKind::kKnown ? known : pseudo)[clusters[i]]
        .push_back(i);
  }

  LinkingResult result;
  result.threshold = threshold;
  std::vector<std::string> labels(num_clusters);
  int fresh = 0;
  for (int c = 0; c < num_clusters; ++c) {
    const auto &k = known[c];
    if (k.empty()) {
      labels[c] = "L" + std::to_string(fresh++);
      continue;
    }
    std::size_t chosen = k.front();
    if (k.size() > 1) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t candidate : k) {
        double mean = 0.0;
        for (std::size_t p : pseudo[c]) mean += d.At(candidate, p);
        if (!pseudo[c].empty()) mean /= pseudo[c].size();
        // Strict comparison keeps the first (lowest index) on ties and when
        // the cluster holds no pseudo-speakers at all.
        if (mean < best) {
          best = mean;
          chosen = candidate;
        }
      }
      IdentityConflict conflict;
      conflict.label = items[chosen].id;
      for (std::size_t candidate : k) conflict.known.push_back(items[candidate].id);
      result.conflicts.push_back(std::move(conflict));
    }
    labels[c] = items[chosen].id;
    result.identified[labels[c]] = items[chosen].id;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!result.assignment.emplace(items[i].id, labels[clusters[i]]).second)
      throw DataError("duplicate item id '" + items[i].id + "'");
  }
  return result;
}

std::vector<Segment> ApplyLinking(const LinkingResult &result,
                                  const std::vector<Segment> &segments) {
  std::vector<Segment> out = segments;
  for (Segment &seg : out) {
    std::string id = PseudoSpeakerId(seg.tape_id, seg.label);
    auto it = result.assignment.find(id);
    seg.label = it == result.assignment.end() ? "unlinked:" + id : it->second;
  }
  return out;
}

std::vector<Segment> QualifyLabels(const std::vector<Segment> &segments) {
  std::vector<Segment> out = segments;
  for (Segment &seg : out) seg.label = PseudoSpeakerId(seg.tape_id, seg.label);
  return out;
}

std::string EmitLinkingJson(const LinkingResult &result) {
  std::string out;
  for (const auto &[id, label] : result.assignment) {
    nlohmann::ordered_json j;
    j["pseudo"] = id;
    j["label"] = label;
    auto known = result.identified.find(label);
    if (known != result.identified.end())
      j["known"] = known->second;
    else
      j["known"] = nullptr;
    out += j.dump();
    out += '\n';
  }
  return out;
}

LinkingResult ParseLinkingJson(std::string_view text) {
  LinkingResult result;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      std::string id = j.at("pseudo").get<std::string>();
      std::string label = j.at("label").get<std::string>();
      if (!j.at("known").is_null())
        result.identified[label] = j["known"].get<std::string>();
      if (!result.assignment.emplace(id, label).second)
        throw DataError("duplicate pseudo-speaker '" + id + "'");
    } catch (const nlohmann::json::exception &e) {
      throw DataError("linking line " + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return result;
}

}  // namespace spklink
