// include/spklink/manifest.h

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

#ifndef SPKLINK_MANIFEST_H_
#define SPKLINK_MANIFEST_H_

#include <string>
#include <string_view>
#include <vector>

#include "spklink/types.h"

namespace spklink {

// JSON lines: {"tape_id": str, "duration": float, "annotated": [on, dur] | null}
ArchiveManifest ParseManifest(std::string_view text);
std::string EmitManifest(const ArchiveManifest &manifest);

ArchiveManifest ReadManifestFile(const std::string &path);
void WriteManifestFile(const std::string &path,
                       const ArchiveManifest &manifest);

// Scoring regions from the annotated fields; tapes without an annotation
// are not scored.
std::vector<ScoringRegion> AnnotatedRegions(const ArchiveManifest &manifest);

// Throws DataError if a segment starts before 0 or runs past the end of its
// tape, or if its tape is not in the manifest.
void CheckSegmentsAgainstManifest(const std::vector<Segment> &segments,
                                  const ArchiveManifest &manifest);

}  // namespace spklink

#endif  // SPKLINK_MANIFEST_H_
