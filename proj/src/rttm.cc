// src/rttm.cc

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

#include "spklink/rttm.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "spklink/binary_io.h"
#include "spklink/common.h"

namespace spklink {

namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool ParseDouble(std::string_view s, double *out) {
  const char *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && ptr == end && std::isfinite(*out);
}

}  // namespace

std::vector<Segment> ParseRttm(std::string_view text) {
  std::vector<Segment> segments;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty() || fields[0][0] == ';' || fields[0][0] == '#') continue;
    auto fail = [&](const std::string &why) {
      return DataError("RTTM line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 9)
      throw fail("expected at least 9 fields, got " +
                 std::to_string(fields.size()));
    if (fields[0] != "SPEAKER") continue;
    Segment seg;
    seg.tape_id = std::string(fields[1]);
    if (!ParseDouble(fields[3], &seg.onset))
      throw fail("non-numeric onset '" + std::string(fields[3]) + "'");
    if (!ParseDouble(fields[4], &seg.duration))
      throw fail("non-numeric duration '" + std::string(fields[4]) + "'");
    if (seg.onset < 0.0) throw fail("negative onset");
    if (seg.duration <= 0.0) throw fail("non-positive duration");
    seg.label = std::string(fields[7]);
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::string EmitRttm(const std::vector<Segment> &segments) {
  std::string out;
  char buf[64];
  for (const Segment &seg : segments) {
    out += "SPEAKER ";
    out += seg.tape_id;
    std::snprintf(buf, sizeof(buf), " 1 %.3f %.3f <NA> <NA> ", seg.onset,
                  seg.duration);
    out += buf;
    out += seg.label;
    out += " <NA> <NA>\n";
  }
  return out;
}

std::vector<Segment> ReadRttmFile(const std::string &path) {
  std::string text = ReadFileBytes(path);
  try {
    return ParseRttm(text);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

void WriteRttmFile(const std::string &path,
                   const std::vector<Segment> &segments) {
  WriteFileBytes(path, EmitRttm(segments));
}

double RoundToMillis(double seconds) {
  return std::round(seconds * 1000.0) / 1000.0;
}

}  // namespace spklink
