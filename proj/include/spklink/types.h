// include/spklink/types.h

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

#ifndef SPKLINK_TYPES_H_
#define SPKLINK_TYPES_H_

#include <optional>
#include <string>
#include <vector>

namespace spklink {

// A labeled time interval on a tape. Times are in seconds.
struct Segment {
  std::string tape_id;
  double onset = 0.0;
  double duration = 0.0;
  std::string label;

  double end() const { return onset + duration; }
  bool operator==(const Segment &other) const = default;
};

// An opaque fixed-dimension speaker representation.
struct Embedding {
  std::string id;
  std::vector<float> vector;

  std::size_t dim() const { return vector.size(); }
  bool operator==(const Embedding &other) const = default;
};

enum class SpeakerKind { kPseudo, kKnown };

// A merged per-tape speaker hypothesis, or a known (enrolled) speaker.
// Known speakers use their name as id and an empty tape_id.
struct PseudoSpeaker {
  std::string id;
  std::string tape_id;
  double total_duration = 0.0;
  std::vector<double> embedding;
  SpeakerKind kind = SpeakerKind::kPseudo;
};

struct Region {
  double onset = 0.0;
  double duration = 0.0;
  bool operator==(const Region &other) const = default;
};

struct ManifestEntry {
  std::string tape_id;
  double duration = 0.0;
  std::optional<Region> annotated;
  bool operator==(const ManifestEntry &other) const = default;
};

struct ArchiveManifest {
  std::vector<ManifestEntry> entries;
};

// Region of a tape over which metrics are evaluated.
struct ScoringRegion {
  std::string tape_id;
  double onset = 0.0;
  double duration = 0.0;
};

// Id of the pseudo-speaker holding `label` on `tape_id`, e.g. "t1/S0".
inline std::string PseudoSpeakerId(const std::string &tape_id,
                                   const std::string &label) {
  return tape_id + "/" + label;
}

}  // namespace spklink

#endif  // SPKLINK_TYPES_H_
