// include/spklink/identities.h

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

#ifndef SPKLINK_IDENTITIES_H_
#define SPKLINK_IDENTITIES_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spklink/condensed_matrix.h"
#include "spklink/merge.h"
#include "spklink/types.h"

namespace spklink {

struct IdentityConflict {
  std::string label;                 // name the cluster was identified as
  std::vector<std::string> known;    // all known speakers in the cluster
};

struct LinkingResult {
  // Every item id (pseudo and known) -> global label.
  std::map<std::string, std::string> assignment;
  // Global labels that were identified as a known speaker.
  std::map<std::string, std::string> identified;
  double threshold = 0.0;
  std::vector<IdentityConflict> conflicts;
};

// Names each cluster: the known speaker in it if there is exactly one; the
// known speaker with the smallest mean distance to the cluster's pseudo
// members if there are several (recorded as a conflict); otherwise a fresh
// "L<k>" label, k counting up in cluster-id order.
LinkingResult ResolveIdentities(const std::vector<int> &clusters,
                                const std::vector<PseudoSpeaker> &items,
                                const CondensedMatrix &d,
                                double threshold = 0.0);

// Relabels segments with their pseudo-speaker's global label. Segments whose
// pseudo-speaker is not in the assignment (e.g. dropped below the duration
// floor) get "unlinked:<tape>/<label>".
std::vector<Segment> ApplyLinking(const LinkingResult &result,
                                  const std::vector<Segment> &segments);

// Stage-1 output with labels made globally unique as "<tape>/<label>"; the
// no-linking baseline.
std::vector<Segment> QualifyLabels(const std::vector<Segment> &segments);

// JSON lines {"pseudo": id, "label": str, "known": str|null}, one per item
// in id order.
std::string EmitLinkingJson(const LinkingResult &result);
LinkingResult ParseLinkingJson(std::string_view text);

}  // namespace spklink

#endif  // SPKLINK_IDENTITIES_H_
