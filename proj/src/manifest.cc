// src/manifest.cc

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

#include "spklink/manifest.h"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "spklink/binary_io.h"
#include "spklink/common.h"

namespace spklink {

using nlohmann::json;

ArchiveManifest ParseManifest(std::string_view text) {
  ArchiveManifest manifest;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto fail = [&](const std::string &why) {
      return DataError("manifest line " + std::to_string(line_no) + ": " +
                       why);
    };
    ManifestEntry entry;
    try {
      json j = json::parse(line);
      entry.tape_id = j.at("tape_id").get<std::string>();
      entry.duration = j.at("duration").get<double>();
      if (j.contains("annotated") && !j["annotated"].is_null()) {
        const json &a = j["annotated"];
        if (!a.is_array() || a.size() != 2) throw fail("bad 'annotated' field");
        entry.annotated = Region{a[0].get<double>(), a[1].get<double>()};
      }
    } catch (const json::exception &e) {
      throw fail(e.what());
    }
    if (!(entry.duration > 0.0) || !std::isfinite(entry.duration))
      throw fail("tape duration must be positive");
    if (entry.annotated) {
      const Region &r = *entry.annotated;
      if (r.onset < 0.0 || r.duration < 0.0 ||
          r.onset + r.duration > entry.duration + 1e-9)
        throw fail("annotated region outside [0, duration]");
    }
    if (!seen.insert(entry.tape_id).second)
      throw fail("duplicate tape_id '" + entry.tape_id + "'");
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

std::string EmitManifest(const ArchiveManifest &manifest) {
  std::string out;
  for (const ManifestEntry &e : manifest.entries) {
    json j;
    j["tape_id"] = e.tape_id;
    j["duration"] = e.duration;
    if (e.annotated)
      j["annotated"] = {e.annotated->onset, e.annotated->duration};
    else
      j["annotated"] = nullptr;
    out += j.dump();
    out += '\n';
  }
  return out;
}

ArchiveManifest ReadManifestFile(const std::string &path) {
  std::string text = ReadFileBytes(path);
  try {
    return ParseManifest(text);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

void WriteManifestFile(const std::string &path,
                       const ArchiveManifest &manifest) {
  WriteFileBytes(path, EmitManifest(manifest));
}

std::vector<ScoringRegion> AnnotatedRegions(const ArchiveManifest &manifest) {
  std::vector<ScoringRegion> regions;
  for (const ManifestEntry &e : manifest.entries)
    if (e.annotated && e.annotated->duration > 0.0)
      regions.push_back({e.tape_id, e.annotated->onset, e.annotated->duration});
  return regions;
}

void CheckSegmentsAgainstManifest(const std::vector<Segment> &segments,
                                  const ArchiveManifest &manifest) {
  std::unordered_map<std::string, double> durations;
  for (const ManifestEntry &e : manifest.entries)
    durations[e.tape_id] = e.duration;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment &s = segments[i];
    auto it = durations.find(s.tape_id);
    if (it == durations.end())
      throw DataError("segment " + std::to_string(i) + ": tape '" + s.tape_id +
                      "' not in manifest");
    // RTTM times carry 3 decimals, so allow half a millisecond of slack.
    if (s.onset < 0.0 || s.end() > it->second + 5e-4)
      throw DataError("segment " + std::to_string(i) + " on tape '" +
                      s.tape_id + "' exceeds the tape duration");
  }
}

}  // namespace spklink
