// include/spklink/rttm.h

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

#ifndef SPKLINK_RTTM_H_
#define SPKLINK_RTTM_H_

#include <string>
#include <string_view>
#include <vector>

#include "spklink/types.h"

namespace spklink {

// Parses RTTM text. Only SPEAKER records are kept; blank lines and lines
// starting with ';' or '#' are ignored. Throws DataError naming the line.
std::vector<Segment> ParseRttm(std::string_view text);

// One "SPEAKER <tape> 1 <onset> <dur> <NA> <NA> <label> <NA> <NA>" line per
// segment, times with 3 decimals.
std::string EmitRttm(const std::vector<Segment> &segments);

std::vector<Segment> ReadRttmFile(const std::string &path);
void WriteRttmFile(const std::string &path,
                   const std::vector<Segment> &segments);

// Rounds a time to the millisecond grid used by the 3-decimal RTTM form.
double RoundToMillis(double seconds);

}  // namespace spklink

#endif  // SPKLINK_RTTM_H_
